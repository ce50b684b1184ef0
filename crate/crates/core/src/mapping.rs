//! Finite-dimensional check that molecular transition operators
//! `|a><b|` can be represented by pseudoparticle bilinears `c_a^dag c_b`
//! with either exchange statistics.
//!
//! The bilinears must satisfy the same algebra as the transition operators,
//! `[c_a^dag c_b, c_g^dag c_d] = delta_bg c_a^dag c_d - delta_da c_g^dag c_b`.
//! Fermions are built by a Jordan-Wigner construction on `2^M` occupation
//! states. Bosons live in the space of occupation vectors with total number at
//! most `cutoff`; the identity is compared on input states whose total number
//! is at most `cutoff - 2`, so no intermediate state can touch the truncation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const MAX_LEVELS: usize = 6;
const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Fermion,
    /// Bosons truncated at `cutoff` total quanta (`cutoff >= 3` keeps the
    /// single-particle sector exact).
    Boson { cutoff: usize },
}

type RMatrix = DMatrix<f64>;

struct Representation {
    annihilators: Vec<RMatrix>,
    /// Input states on which the identity is checked.
    trusted: Vec<usize>,
}

fn fermion_representation(m: usize) -> Representation {
    let dim = 1usize << m;
    let annihilators = (0..m)
        .map(|a| {
            let mut c = RMatrix::zeros(dim, dim);
            for state in 0..dim {
                if state & (1 << a) != 0 {
                    // Jordan-Wigner sign from the occupied modes below `a`.
                    let below = (state & ((1 << a) - 1)).count_ones();
                    let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
                    c[(state ^ (1 << a), state)] = sign;
                }
            }
            c
        })
        .collect();
    Representation {
        annihilators,
        trusted: (0..dim).collect(),
    }
}

fn occupations(m: usize, cutoff: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for n in 0..=left {
            prefix.push(n);
            rec(m, left - n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, cutoff, &mut Vec::new(), &mut out);
    out
}

fn boson_representation(m: usize, cutoff: usize) -> Representation {
    let states = occupations(m, cutoff);
    let index: std::collections::HashMap<&[usize], usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let dim = states.len();
    let annihilators = (0..m)
        .map(|a| {
            let mut c = RMatrix::zeros(dim, dim);
            for (j, s) in states.iter().enumerate() {
                if s[a] > 0 {
                    let mut t = s.clone();
                    t[a] -= 1;
                    c[(index[t.as_slice()], j)] = (s[a] as f64).sqrt();
                }
            }
            c
        })
        .collect();
    let trusted = states
        .iter()
        .enumerate()
        .filter(|(_, s)| s.iter().sum::<usize>() + 2 <= cutoff)
        .map(|(i, _)| i)
        .collect();
    Representation {
        annihilators,
        trusted,
    }
}

/// Returns `true` iff all `M^4` commutator identities hold to `1e-12` on the
/// trusted input states.
pub fn verify_mapping_commutators(m: usize, statistics: Statistics) -> Result<bool> {
    if m == 0 {
        return Err(Error::param("m", "at least one level is required"));
    }
    if m > MAX_LEVELS {
        return Err(Error::Resource(format!(
            "{m} levels exceed the dense-representation limit of {MAX_LEVELS}"
        )));
    }
    let rep = match statistics {
        Statistics::Fermion => fermion_representation(m),
        Statistics::Boson { cutoff } => {
            if cutoff < 3 {
                return Err(Error::param(
                    "cutoff",
                    "boson truncation must keep at least 3 quanta",
                ));
            }
            boson_representation(m, cutoff)
        }
    };
    Ok(identities_hold(&rep))
}

fn identities_hold(rep: &Representation) -> bool {
    if rep.trusted.is_empty() {
        return false;
    }
    let m = rep.annihilators.len();

    // Bilinears E_ab = c_a^dag c_b.
    let bilinear: Vec<Vec<RMatrix>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| rep.annihilators[a].transpose() * &rep.annihilators[b])
                .collect()
        })
        .collect();

    for a in 0..m {
        for b in 0..m {
            for g in 0..m {
                for d in 0..m {
                    let lhs = &bilinear[a][b] * &bilinear[g][d] - &bilinear[g][d] * &bilinear[a][b];
                    let mut rhs = RMatrix::zeros(lhs.nrows(), lhs.ncols());
                    if b == g {
                        rhs += &bilinear[a][d];
                    }
                    if d == a {
                        rhs -= &bilinear[g][b];
                    }
                    for &col in &rep.trusted {
                        let worst = (0..lhs.nrows())
                            .map(|row| (lhs[(row, col)] - rhs[(row, col)]).abs())
                            .fold(0.0, f64::max);
                        if worst > IDENTITY_TOL {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermions_satisfy_anticommutation() {
        let rep = fermion_representation(3);
        let dim = 8;
        for a in 0..3 {
            for b in 0..3 {
                let c = &rep.annihilators[a];
                let cd = rep.annihilators[b].transpose();
                let anti = c * &cd + &cd * c;
                let expect = if a == b { RMatrix::identity(dim, dim) } else { RMatrix::zeros(dim, dim) };
                assert!((anti - expect).abs().max() < 1e-15);
            }
        }
    }

    #[test]
    fn small_cases() {
        assert!(verify_mapping_commutators(2, Statistics::Fermion).unwrap());
        assert!(verify_mapping_commutators(3, Statistics::Fermion).unwrap());
        assert!(verify_mapping_commutators(2, Statistics::Boson { cutoff: 3 }).unwrap());
    }

    #[test]
    fn wrong_normalization_is_detected() {
        for mut rep in [fermion_representation(2), boson_representation(2, 3)] {
            rep.annihilators[0] *= 2f64.sqrt();
            assert!(!identities_hold(&rep));
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(
            verify_mapping_commutators(7, Statistics::Fermion),
            Err(Error::Resource(_))
        ));
        assert!(verify_mapping_commutators(2, Statistics::Boson { cutoff: 2 }).is_err());
        assert!(verify_mapping_commutators(0, Statistics::Fermion).is_err());
    }
}
