use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{RepConfig, RepError};
use crate::linalg::rat::{format_rat, serde_rat, serde_rat_vec};
use crate::linalg::{Mat, Rat, Subspace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightDecomposition {
    /// Distinct eigenvalues, ascending.
    #[serde(with = "serde_rat_vec")]
    pub eigenvalues: Vec<Rat>,
    pub multiplicities: Vec<usize>,
    pub eigenbases: Vec<Subspace>,
    /// Eigenvalue on each stored coordinate of `V`.
    #[serde(with = "serde_rat_vec")]
    pub coordinate_weights: Vec<Rat>,
}

impl WeightDecomposition {
    pub fn dim(&self) -> usize {
        self.coordinate_weights.len()
    }

    pub fn max_eigenvalue(&self) -> &Rat {
        self.eigenvalues.last().expect("V is nonzero")
    }

    pub fn min_eigenvalue(&self) -> &Rat {
        self.eigenvalues.first().expect("V is nonzero")
    }

    /// Index of `mu` in `eigenvalues`.
    pub fn level(&self, mu: &Rat) -> Option<usize> {
        self.eigenvalues.binary_search(mu).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagProjector {
    #[serde(with = "serde_rat")]
    pub mu: Rat,
    /// `V^(mu)`, the sum of eigenspaces with eigenvalue `>= mu`.
    pub flag: Subspace,
    pub projector: Mat,
}

pub fn weight_decompose(cfg: &RepConfig) -> Result<WeightDecomposition, RepError> {
    let a = &cfg.a_action;
    if !a.is_diagonal() {
        return Err(RepError::Rationality(
            "a is not diagonal in the stored coordinates".into(),
        ));
    }
    let coordinate_weights = cfg.coordinate_weights();
    let mut eigenvalues = coordinate_weights.clone();
    eigenvalues.sort();
    eigenvalues.dedup();
    let mut multiplicities = Vec::with_capacity(eigenvalues.len());
    let mut eigenbases = Vec::with_capacity(eigenvalues.len());
    for mu in &eigenvalues {
        let idx: Vec<usize> = (0..cfg.n)
            .filter(|&i| &coordinate_weights[i] == mu)
            .collect();
        let space = Subspace::coordinate(cfg.n, &idx);
        for v in space.basis().columns() {
            let av = a.mul_vec(&v);
            if av.iter().zip(&v).any(|(x, y)| x != &(mu * y)) {
                return Err(RepError::Rationality(format!(
                    "a does not act by {} on its eigenbasis",
                    format_rat(mu)
                )));
            }
        }
        multiplicities.push(idx.len());
        eigenbases.push(space);
    }
    Ok(WeightDecomposition {
        eigenvalues,
        multiplicities,
        eigenbases,
        coordinate_weights,
    })
}

pub fn flag_projector(dec: &WeightDecomposition, mu: &Rat) -> Result<FlagProjector, RepError> {
    if dec.level(mu).is_none() {
        return Err(RepError::InvalidLevel(format_rat(mu)));
    }
    let n = dec.dim();
    let idx: Vec<usize> = (0..n)
        .filter(|&i| &dec.coordinate_weights[i] >= mu)
        .collect();
    let mut projector = Mat::zeros(n, n);
    for &i in &idx {
        projector[(i, i)] = Rat::one();
    }
    Ok(FlagProjector {
        mu: mu.clone(),
        flag: Subspace::coordinate(n, &idx),
        projector,
    })
}

pub fn check_proximal(dec: &WeightDecomposition) -> bool {
    dec.multiplicities.last() == Some(&1)
}

/// Generators of the expanding and contracting horospherical subalgebras
/// as matrices on `V`.
pub fn horospherical_basis(cfg: &RepConfig) -> Result<(Vec<Mat>, Vec<Mat>), RepError> {
    let ad = cfg.h_internal.as_ref().ok_or(RepError::IncompleteConfig)?;
    // ad(a) in the h basis, from the coordinates of a.
    let a_vec: Vec<Vec<Rat>> = cfg.h_basis.iter().map(|x| x.entries().to_vec()).collect();
    let span = super::config::SpanCoords::new(&a_vec)
        .ok_or_else(|| RepError::Unsupported("h_basis is linearly dependent".into()))?;
    let c = span
        .coords(cfg.a_action.entries())
        .ok_or_else(|| RepError::Unsupported("a does not lie in h".into()))?;
    let mut ad_a = Mat::zeros(cfg.h_dim, cfg.h_dim);
    for (ci, m) in c.iter().zip(ad) {
        if !ci.is_zero() {
            ad_a = &ad_a + &m.scale(ci);
        }
    }
    let pick = |indices: &[usize], positive: bool| -> Result<Vec<Mat>, RepError> {
        indices
            .iter()
            .map(|&i| {
                let col = ad_a.column(i);
                let w = &col[i];
                let eigen = col.iter().enumerate().all(|(k, v)| k == i || v.is_zero());
                if !eigen || (positive && w <= &Rat::zero()) || (!positive && w >= &Rat::zero()) {
                    return Err(RepError::Unsupported(format!(
                        "h_basis[{i}] is not a root vector of the expected sign"
                    )));
                }
                let x = &cfg.h_basis[i];
                if !x.pow(cfg.n as u32).is_zero() {
                    return Err(RepError::Unsupported(format!(
                        "h_basis[{i}] is not nilpotent"
                    )));
                }
                Ok(x.clone())
            })
            .collect()
    };
    Ok((
        pick(&cfg.u_plus_indices, true)?,
        pick(&cfg.u_minus_indices, false)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::rep::{build_config, ConfigKind};

    fn so21() -> RepConfig {
        build_config(ConfigKind::SoPq { p: 2, q: 1 }).unwrap()
    }

    #[test]
    fn so21_weights_and_flags() {
        let dec = weight_decompose(&so21()).unwrap();
        assert_eq!(dec.eigenvalues, (-2..=2).map(int).collect::<Vec<_>>());
        assert_eq!(dec.multiplicities, vec![1; 5]);
        assert!(check_proximal(&dec));
        assert_eq!(flag_projector(&dec, &int(2)).unwrap().flag.dim(), 1);
        assert_eq!(flag_projector(&dec, &int(0)).unwrap().flag.dim(), 3);
        let bottom = flag_projector(&dec, &int(-2)).unwrap();
        assert_eq!(bottom.projector, Mat::identity(5));
        assert!(matches!(
            flag_projector(&dec, &int(3)),
            Err(RepError::InvalidLevel(_))
        ));
    }

    #[test]
    fn sp4_weights() {
        let cfg = build_config(ConfigKind::Sp2n { n: 2 }).unwrap();
        let dec = weight_decompose(&cfg).unwrap();
        assert_eq!(
            dec.eigenvalues,
            vec![int(-3), int(-1), int(0), int(1), int(3)]
        );
        assert!(check_proximal(&dec));
        assert_eq!(horospherical_basis(&cfg).unwrap().0.len(), 4);
    }

    #[test]
    fn sym1_is_symmetric_pair() {
        let dec = weight_decompose(&build_config(ConfigKind::Sl2Sym { k: 1 }).unwrap()).unwrap();
        assert_eq!(dec.eigenvalues, vec![int(-1), int(1)]);
        assert_eq!(dec.multiplicities, vec![1, 1]);
    }

    #[test]
    fn duplicated_top_weight_is_not_proximal() {
        let cfg = build_config(ConfigKind::TensorStd { n: 2, m: 2 }).unwrap();
        let mut dec = weight_decompose(&cfg).unwrap();
        assert!(check_proximal(&dec));
        *dec.multiplicities.last_mut().unwrap() = 2;
        assert!(!check_proximal(&dec));
    }

    #[test]
    fn horospherical_dims() {
        assert_eq!(horospherical_basis(&so21()).unwrap().0.len(), 1);
        for k in [1, 2, 5] {
            let cfg = build_config(ConfigKind::Sl2Sym { k }).unwrap();
            let (up, down) = horospherical_basis(&cfg).unwrap();
            assert_eq!((up.len(), down.len()), (1, 1));
        }
        let mut cfg = so21();
        cfg.h_internal = None;
        assert!(matches!(
            horospherical_basis(&cfg),
            Err(RepError::IncompleteConfig)
        ));
    }

    #[test]
    fn flags_are_u_plus_stable() {
        for text in ["so_pq:2,2", "sp2n:2", "tensor:2,2"] {
            let cfg = build_config(text.parse().unwrap()).unwrap();
            let dec = weight_decompose(&cfg).unwrap();
            let (up, _) = horospherical_basis(&cfg).unwrap();
            for mu in &dec.eigenvalues {
                let flag = flag_projector(&dec, mu).unwrap().flag;
                for x in &up {
                    assert!(flag.contains(&flag.image(x)), "{text} at {mu}");
                }
            }
        }
    }
}
