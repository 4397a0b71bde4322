//! Generators for every matrix family and integer sequence the crate
//! studies, as pure functions of the size `n` (and factor indices).
//!
//! Entry formulas use 1-based indices `j, k` to match the usual
//! definitions; the matrix container itself is 0-based.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{pow2, Int, Rat};
use crate::matrix::{det_bareiss, det_bareiss_rat, IntMatrix, Matrix, RatMatrix};

/// Identifier of a generated matrix family.
///
/// * `A1`: `[j - k + d_jk]` (determinants are OEIS A079034)
/// * `A2`: `[2^(j-k) - (-1)^d_jk]` (rational entries)
/// * `B`: `[|j - k| + d_jk]` (determinants are OEIS A166445)
/// * `AbsDiff`: `[|j - k|]`
/// * `T`/`TTilde`: elementary unit-determinant factors: the identity
///   with one extra `-1` (resp. `+1`) entry at `(j0, k0)`
/// * `Hankel`: `[a_(j+k-1)]` over OEIS A025276
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyId {
    A1,
    A2,
    B,
    AbsDiff,
    T { j0: usize, k0: usize },
    TTilde { j0: usize, k0: usize },
    Hankel,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::A1 => write!(f, "a1"),
            FamilyId::A2 => write!(f, "a2"),
            FamilyId::B => write!(f, "b"),
            FamilyId::AbsDiff => write!(f, "absdiff"),
            FamilyId::T { j0, k0 } => write!(f, "t:{j0},{k0}"),
            FamilyId::TTilde { j0, k0 } => write!(f, "ttilde:{j0},{k0}"),
            FamilyId::Hankel => write!(f, "hankel"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let parse_indices = |body: &str| -> Result<(usize, usize)> {
            let mut it = body.splitn(2, ',');
            let j0 = it.next().and_then(|x| x.trim().parse().ok());
            let k0 = it.next().and_then(|x| x.trim().parse().ok());
            match (j0, k0) {
                (Some(j0), Some(k0)) => Ok((j0, k0)),
                _ => Err(Error::UnknownFamily(s.to_string())),
            }
        };
        match lower.as_str() {
            "a1" => Ok(FamilyId::A1),
            "a2" => Ok(FamilyId::A2),
            "b" => Ok(FamilyId::B),
            "absdiff" => Ok(FamilyId::AbsDiff),
            "hankel" => Ok(FamilyId::Hankel),
            _ => {
                if let Some(body) = lower.strip_prefix("ttilde:") {
                    let (j0, k0) = parse_indices(body)?;
                    Ok(FamilyId::TTilde { j0, k0 })
                } else if let Some(body) = lower.strip_prefix("t:") {
                    let (j0, k0) = parse_indices(body)?;
                    Ok(FamilyId::T { j0, k0 })
                } else {
                    Err(Error::UnknownFamily(s.to_string()))
                }
            }
        }
    }
}

/// A generated matrix: integer for every family except `A2`, which is
/// rational because its upper triangle holds negative powers of two.
#[derive(Clone, Debug, PartialEq)]
pub enum GenMatrix {
    Int(IntMatrix),
    Rat(RatMatrix),
}

impl GenMatrix {
    pub fn size(&self) -> usize {
        match self {
            GenMatrix::Int(m) => m.rows(),
            GenMatrix::Rat(m) => m.rows(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GenMatrix::Int(_) => "integer",
            GenMatrix::Rat(_) => "rational",
        }
    }

    pub fn to_rat(&self) -> RatMatrix {
        match self {
            GenMatrix::Int(m) => m.to_rat(),
            GenMatrix::Rat(m) => m.clone(),
        }
    }

    pub fn det_bareiss(&self) -> Result<Rat> {
        match self {
            GenMatrix::Int(m) => Ok(Rat::from_integer(det_bareiss(m)?)),
            GenMatrix::Rat(m) => det_bareiss_rat(m),
        }
    }

    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        match self {
            GenMatrix::Int(m) => m.entry_strings(),
            GenMatrix::Rat(m) => m.entry_strings(),
        }
    }
}

fn require_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptySize);
    }
    Ok(())
}

fn require_factor_indices(n: usize, j0: usize, k0: usize) -> Result<()> {
    if j0 == 0 || k0 == 0 || j0 > n || k0 > n || j0 == k0 {
        return Err(Error::BadFactorIndex { j0, k0, n });
    }
    Ok(())
}

/// Generates any family at size `n`.
pub fn gen(fam: &FamilyId, n: usize) -> Result<GenMatrix> {
    require_size(n)?;
    Ok(match fam {
        FamilyId::A1 => GenMatrix::Int(gen_a1(n)),
        FamilyId::A2 => GenMatrix::Rat(gen_a2(n)),
        FamilyId::B => GenMatrix::Int(gen_b(n)),
        FamilyId::AbsDiff => GenMatrix::Int(gen_absdiff(n)),
        FamilyId::T { j0, k0 } => {
            require_factor_indices(n, *j0, *k0)?;
            GenMatrix::Int(gen_t(n, *j0, *k0))
        }
        FamilyId::TTilde { j0, k0 } => {
            require_factor_indices(n, *j0, *k0)?;
            GenMatrix::Int(gen_ttilde(n, *j0, *k0))
        }
        FamilyId::Hankel => GenMatrix::Int(gen_hankel(n)),
    })
}

/// `[j - k + d_jk]`, integer entries.
pub fn gen_a1(n: usize) -> IntMatrix {
    assert!(n >= 1);
    Matrix::from_fn(n, n, |r, c| {
        let (j, k) = (r as i64 + 1, c as i64 + 1);
        Int::from(j - k + i64::from(j == k))
    })
}

/// `[2^(j-k) - (-1)^d_jk]`: diagonal entries `2`, off-diagonal
/// `2^(j-k) - 1`. Kept rational (not rescaled to integers) so that the
/// half-integer closed form of its determinant checks exactly.
pub fn gen_a2(n: usize) -> RatMatrix {
    assert!(n >= 1);
    Matrix::from_fn(n, n, |r, c| {
        let (j, k) = (r as i64 + 1, c as i64 + 1);
        if j == k {
            Rat::from_integer(Int::from(2))
        } else {
            pow2(j - k) - Rat::one()
        }
    })
}

/// `[|j - k| + d_jk]`, integer entries.
pub fn gen_b(n: usize) -> IntMatrix {
    assert!(n >= 1);
    Matrix::from_fn(n, n, |r, c| {
        let (j, k) = (r as i64 + 1, c as i64 + 1);
        Int::from((j - k).abs() + i64::from(j == k))
    })
}

/// `[|j - k|]`, integer entries.
pub fn gen_absdiff(n: usize) -> IntMatrix {
    assert!(n >= 1);
    Matrix::from_fn(n, n, |r, c| Int::from((r as i64 - c as i64).abs()))
}

/// `[j - k]`: singular for n >= 3 since row1 + row3 = 2 * row2.
pub fn gen_jmk(n: usize) -> IntMatrix {
    assert!(n >= 1);
    Matrix::from_fn(n, n, |r, c| Int::from(r as i64 - c as i64))
}

/// `[2^(j-k) - 1]`: singular for n >= 3.
pub fn gen_pow2_minus_one(n: usize) -> RatMatrix {
    assert!(n >= 1);
    Matrix::from_fn(n, n, |r, c| pow2(r as i64 - c as i64) - Rat::one())
}

/// The elementary factor `T(j0,k0)`: identity plus a `-1` at `(j0, k0)`.
/// Unit determinant (triangular up to symmetry of the single off entry).
pub fn gen_t(n: usize, j0: usize, k0: usize) -> IntMatrix {
    assert!(j0 >= 1 && k0 >= 1 && j0 <= n && k0 <= n && j0 != k0);
    Matrix::from_fn(n, n, |r, c| {
        if r == c {
            Int::one()
        } else if r + 1 == j0 && c + 1 == k0 {
            -Int::one()
        } else {
            Int::zero()
        }
    })
}

/// The elementary factor `T~(j0,k0)`: identity plus a `+1` at `(j0, k0)`.
pub fn gen_ttilde(n: usize, j0: usize, k0: usize) -> IntMatrix {
    assert!(j0 >= 1 && k0 >= 1 && j0 <= n && k0 <= n && j0 != k0);
    Matrix::from_fn(n, n, |r, c| {
        if r == c || (r + 1 == j0 && c + 1 == k0) {
            Int::one()
        } else {
            Int::zero()
        }
    })
}

/// First `m` terms of OEIS A025276: seeds `1, 0, 0, 1`, then the
/// self-convolution `a_n = sum_(k=1)^(n-1) a_k a_(n-k)` for `n >= 5`.
pub fn a025276(m: usize) -> Vec<Int> {
    assert!(m >= 1);
    let seeds = [1i64, 0, 0, 1];
    let mut a: Vec<Int> = seeds.iter().take(m).map(|&x| Int::from(x)).collect();
    for n in a.len()..m {
        // 0-based: a[n] = sum_{k=0}^{n-1} a[k] * a[n-1-k]
        let mut acc = Int::zero();
        for k in 0..n {
            acc += &a[k] * &a[n - 1 - k];
        }
        a.push(acc);
    }
    a
}

/// Hankel matrix `[a_(j+k-1)]` of A025276 at size `n`.
pub fn gen_hankel(n: usize) -> IntMatrix {
    assert!(n >= 1);
    let a = a025276(2 * n - 1);
    Matrix::from_fn(n, n, |r, c| a[r + c].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::matrix::det_cofactor;

    #[test]
    fn family_strings_round_trip() {
        for s in ["a1", "a2", "b", "absdiff", "t:1,2", "ttilde:3,1", "hankel"] {
            let fam: FamilyId = s.parse().unwrap();
            assert_eq!(fam.to_string(), s);
        }
        assert!("nope".parse::<FamilyId>().is_err());
        assert!("t:1".parse::<FamilyId>().is_err());
        assert!("t:0,2".parse::<FamilyId>().and_then(|f| gen(&f, 3)).is_err());
    }

    #[test]
    fn generator_entries() {
        let a1 = gen_a1(2);
        assert_eq!(a1.entry_strings(), vec![vec!["1", "-1"], vec!["1", "1"]]);

        let a2 = gen_a2(2);
        assert_eq!(*a2.get(0, 1), rat(-1, 2));
        assert_eq!(*a2.get(0, 0), rat(2, 1));
        assert_eq!(*a2.get(1, 0), rat(1, 1));

        let b = gen_b(3);
        assert_eq!(
            b.entry_strings(),
            vec![vec!["1", "1", "2"], vec!["1", "1", "1"], vec!["2", "1", "1"]]
        );

        let t = gen_t(2, 1, 2);
        assert_eq!(t.entry_strings(), vec![vec!["1", "-1"], vec!["0", "1"]]);
    }

    #[test]
    fn size_zero_is_rejected() {
        assert!(matches!(gen(&FamilyId::A1, 0), Err(Error::EmptySize)));
        assert!(matches!(
            gen(&FamilyId::T { j0: 1, k0: 1 }, 3),
            Err(Error::BadFactorIndex { .. })
        ));
    }

    #[test]
    fn a025276_first_ten_terms() {
        let want: Vec<Int> = [1i64, 0, 0, 1, 2, 4, 8, 17, 38, 88]
            .iter()
            .map(|&x| int(x))
            .collect();
        assert_eq!(a025276(10), want);
        // hand-evaluated convolutions
        assert_eq!(a025276(5)[4], int(2)); // a1a4 + a2a3 + a3a2 + a4a1
        assert_eq!(a025276(6)[5], int(4)); // 2a1a5 + 2a2a4 + a3^2
    }

    #[test]
    fn hankel_matrices_from_seeds() {
        assert_eq!(gen_hankel(1).entry_strings(), vec![vec!["1"]]);
        assert_eq!(
            gen_hankel(2).entry_strings(),
            vec![vec!["1", "0"], vec!["0", "0"]]
        );
        assert_eq!(
            gen_hankel(3).entry_strings(),
            vec![vec!["1", "0", "0"], vec!["0", "0", "1"], vec!["0", "1", "2"]]
        );
    }

    #[test]
    fn toeplitz_off_diagonal_structure() {
        for n in 2..=10usize {
            let a1 = gen_a1(n);
            let a2 = gen_a2(n);
            let ad = gen_absdiff(n);
            for j in 0..n - 1 {
                for k in 0..n - 1 {
                    assert_eq!(a1.get(j, k), a1.get(j + 1, k + 1));
                    assert_eq!(a2.get(j, k), a2.get(j + 1, k + 1));
                    assert_eq!(ad.get(j, k), ad.get(j + 1, k + 1));
                }
            }
        }
    }

    #[test]
    fn symmetry_and_antisymmetry() {
        for n in 1..=8usize {
            let b = gen_b(n);
            let ad = gen_absdiff(n);
            assert_eq!(b.transpose(), b);
            assert_eq!(ad.transpose(), ad);
            // A1 - I is antisymmetric
            let a1 = gen_a1(n);
            let skew = IntMatrix::from_fn(n, n, |r, c| {
                a1.get(r, c) - if r == c { int(1) } else { int(0) }
            });
            let negt = skew.transpose().map(|x| -x.clone());
            assert_eq!(skew, negt);
        }
    }

    #[test]
    fn vanishing_determinants() {
        for n in 3..=12usize {
            assert_eq!(det_bareiss(&gen_jmk(n)).unwrap(), int(0), "det [j-k] at n={n}");
            assert_eq!(
                det_bareiss_rat(&gen_pow2_minus_one(n)).unwrap(),
                rat(0, 1),
                "det [2^(j-k)-1] at n={n}"
            );
        }
    }

    #[test]
    fn elementary_factors_have_unit_determinant() {
        for n in [2usize, 3, 5, 9] {
            for j0 in 1..=n {
                for k0 in 1..=n {
                    if j0 == k0 {
                        continue;
                    }
                    assert_eq!(det_bareiss(&gen_t(n, j0, k0)).unwrap(), int(1));
                    assert_eq!(det_bareiss(&gen_ttilde(n, j0, k0)).unwrap(), int(1));
                }
            }
        }
    }

    #[test]
    fn cofactor_agrees_on_b4() {
        assert_eq!(det_cofactor(&gen_b(4)).unwrap(), int(1));
    }
}
