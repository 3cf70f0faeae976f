//! Root data of type A_n in the fundamental-weight basis.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ratfield::Rat;

/// Cartan matrix and symmetrizer of type A_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub rank: usize,
    pub matrix: Vec<Vec<i64>>,
    pub symmetrizer: Vec<i64>,
}

impl CartanData {
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i - 1][j - 1]
    }

    /// Simple root `alpha_i` in fundamental-weight coordinates: row `i` of
    /// the Cartan matrix.
    pub fn alpha(&self, i: usize) -> Weight {
        Weight::new(self.matrix[i - 1].clone())
    }

    /// Exact inverse of the Cartan matrix; its entries are the pairings
    /// `(w_i, w_j)` of fundamental weights.
    pub fn inverse(&self) -> Vec<Vec<Rat>> {
        let n = self.rank;
        let mut m: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rat> =
                    self.matrix[i].iter().map(|&x| Rat::from_integer(x.into())).collect();
                row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("Cartan matrix is invertible");
            m.swap(c, p);
            let inv = m[c][c].recip();
            for x in m[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in 0..2 * n {
                        let d = &f * &m[c][k];
                        m[r][k] -= d;
                    }
                }
            }
        }
        m.into_iter().map(|row| row[n..].to_vec()).collect()
    }

    /// Symmetric form `(mu, nu) = mu^T A^{-1} nu`.
    pub fn pairing(&self, mu: &Weight, nu: &Weight) -> Rat {
        assert_eq!(mu.rank(), self.rank, "weight rank mismatch");
        assert_eq!(nu.rank(), self.rank, "weight rank mismatch");
        let inv = self.inverse();
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += &inv[i][j] * Rat::from_integer((mu.coords[i] * nu.coords[j]).into());
            }
        }
        acc
    }

    /// Pairing that must be an integer, such as `(mu - nu, rho)` for `mu - nu`
    /// in the root lattice.
    pub fn pairing_int(&self, mu: &Weight, nu: &Weight) -> Result<i64> {
        let p = self.pairing(mu, nu);
        if p.is_integer() {
            Ok(i64::try_from(p.to_integer()).expect("small pairing"))
        } else {
            Err(Error::Invalid(format!("pairing ({mu}, {nu}) = {p} is not an integer")))
        }
    }
}

pub fn cartan_matrix(n: usize) -> CartanData {
    assert!(n >= 1, "rank must be positive");
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    CartanData { rank: n, matrix, symmetrizer: vec![1; n] }
}

/// Integral weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<i64>,
}

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight { coords }
    }

    pub fn zero(n: usize) -> Self {
        Weight { coords: vec![0; n] }
    }

    /// Fundamental weight `w_i`, 1-based.
    pub fn fundamental(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i - 1] = 1;
        Weight { coords: c }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate `<lambda, alpha_i^vee>`, 1-based.
    pub fn at(&self, i: usize) -> i64 {
        self.coords[i - 1]
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn parse(s: &str) -> Result<Weight> {
        let coords = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad weight {s:?}")))?;
        if coords.is_empty() {
            return Err(Error::Parse("empty weight".into()));
        }
        Ok(Weight { coords })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scale(-1)
    }
}

pub fn rho(n: usize) -> Weight {
    Weight { coords: vec![1; n] }
}

/// Word in the simple reflections `s_1..s_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylWord {
    pub rank: usize,
    pub letters: Vec<usize>,
}

impl WeylWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `w(lambda)` for `w = s_{i_1} ... s_{i_k}`: the rightmost letter acts first.
    pub fn act(&self, lambda: &Weight, cartan: &CartanData) -> Weight {
        self.letters.iter().rev().fold(lambda.clone(), |w, &i| {
            let alpha = cartan.alpha(i);
            &w - &alpha.scale(w.at(i))
        })
    }

    /// True when every positive root is sent to a negative root, which for a
    /// word of length `n(n+1)/2` characterizes reduced words of `w_0`.
    pub fn sends_positive_to_negative(&self, cartan: &CartanData) -> bool {
        let n = cartan.rank;
        for a in 1..=n {
            for b in a..=n {
                // root alpha_a + ... + alpha_b, tracked in root coordinates
                let mut beta = vec![0i64; n];
                for x in &mut beta[a - 1..b] {
                    *x = 1;
                }
                for &i in self.letters.iter().rev() {
                    let pair: i64 = (1..=n).map(|j| beta[j - 1] * cartan.a(j, i)).sum();
                    beta[i - 1] -= pair;
                }
                if beta.iter().any(|&c| c > 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn parse(n: usize, s: &str) -> Result<WeylWord> {
        let letters = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad Weyl word {s:?}")))?;
        if letters.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::Parse(format!("letter out of range in {s:?}")));
        }
        Ok(WeylWord { rank: n, letters })
    }
}

/// Staircase reduced expression `s_1 (s_2 s_1) (s_3 s_2 s_1) ...` of the
/// longest Weyl group element.
pub fn longest_word(n: usize) -> WeylWord {
    let letters = (1..=n).flat_map(|k| (1..=k).rev()).collect();
    WeylWord { rank: n, letters }
}

/// `-w_0` on weights, which for type A reverses the coordinates.
pub fn minus_w0(lambda: &Weight) -> Weight {
    Weight { coords: lambda.coords.iter().rev().cloned().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfield::rat;

    #[test]
    fn matrices_of_small_rank() {
        assert_eq!(cartan_matrix(1).matrix, vec![vec![2]]);
        assert_eq!(cartan_matrix(2).matrix, vec![vec![2, -1], vec![-1, 2]]);
        let c = cartan_matrix(5);
        for i in 1..=5 {
            for j in 1..=5 {
                assert_eq!(c.a(i, j), c.a(j, i));
            }
        }
    }

    #[test]
    fn pairing_examples() {
        for n in 1..=4 {
            let c = cartan_matrix(n);
            assert_eq!(c.pairing(&c.alpha(1), &c.alpha(1)), rat(2, 1));
        }
        let c = cartan_matrix(2);
        let w1 = Weight::fundamental(2, 1);
        assert_eq!(c.pairing(&w1, &c.alpha(2)), rat(0, 1));
        assert_eq!(c.pairing(&w1, &c.alpha(1)), rat(1, 1));
        let c1 = cartan_matrix(1);
        let w = Weight::fundamental(1, 1);
        assert_eq!(c1.pairing(&w, &w), rat(1, 2));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(2).coords, vec![1, 1]);
        let c = cartan_matrix(3);
        for i in 1..=3 {
            assert_eq!(c.pairing(&rho(3), &c.alpha(i)), rat(1, 1));
        }
        let c1 = cartan_matrix(1);
        assert_eq!(c1.pairing(&rho(1).scale(2), &c1.alpha(1)), rat(2, 1));
    }

    #[test]
    fn gram_matrix_is_positive_definite() {
        for n in 1..=4 {
            let inv = cartan_matrix(n).inverse();
            // leading principal minors, by fraction-valued elimination
            for k in 1..=n {
                let mut m: Vec<Vec<Rat>> = (0..k).map(|i| inv[i][..k].to_vec()).collect();
                let mut det = Rat::one();
                for c in 0..k {
                    let piv = m[c][c].clone();
                    assert!(piv > Rat::zero());
                    det *= &piv;
                    for r in c + 1..k {
                        let f = &m[r][c] / &piv;
                        for j in c..k {
                            let d = &f * &m[c][j];
                            m[r][j] -= d;
                        }
                    }
                }
                assert!(det > Rat::zero());
            }
        }
    }

    #[test]
    fn longest_words() {
        assert_eq!(longest_word(1).letters, vec![1]);
        assert_eq!(longest_word(2).letters, vec![1, 2, 1]);
        assert_eq!(longest_word(3).len(), 6);
        for n in 1..=5 {
            let w = longest_word(n);
            assert_eq!(w.len(), n * (n + 1) / 2);
            assert!(w.sends_positive_to_negative(&cartan_matrix(n)));
        }
        let short = WeylWord { rank: 2, letters: vec![1, 2] };
        assert!(!short.sends_positive_to_negative(&cartan_matrix(2)));
    }

    #[test]
    fn minus_w0_matches_word_action() {
        for n in 1..=4 {
            let c = cartan_matrix(n);
            let w0 = longest_word(n);
            for i in 1..=n {
                let w = Weight::fundamental(n, i);
                assert_eq!(minus_w0(&w), -&w0.act(&w, &c));
            }
        }
        assert_eq!(minus_w0(&Weight::new(vec![1, 0])).coords, vec![0, 1]);
        assert_eq!(minus_w0(&Weight::new(vec![3])).coords, vec![3]);
        assert_eq!(minus_w0(&rho(3)), rho(3));
    }

    #[test]
    fn minus_w0_is_an_isometric_involution() {
        let c = cartan_matrix(3);
        let a = Weight::new(vec![2, -1, 3]);
        let b = Weight::new(vec![0, 4, -2]);
        assert_eq!(minus_w0(&minus_w0(&a)), a);
        assert_eq!(c.pairing(&minus_w0(&a), &minus_w0(&b)), c.pairing(&a, &b));
    }
}
