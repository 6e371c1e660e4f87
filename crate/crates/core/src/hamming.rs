//! Hamming distance and radius-(m-1) ball centers.
//!
//! A word lies in the ball `B_{m-1}(a)` exactly when it agrees with `a` in at
//! least one coordinate, which is what lets a group of `m` players who all
//! guess the coordinates of `a` guarantee one correct guess.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};
use crate::words::{check_word, next_word, Color};

pub type Word = Vec<Color>;

pub fn hamming_distance(x: &[Color], y: &[Color]) -> Result<usize> {
    if x.len() != y.len() {
        return param(format!("length mismatch: {} vs {}", x.len(), y.len()));
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count())
}

/// True when `x` and `y` agree somewhere, i.e. their distance is below the
/// word length. Lengths must match.
#[inline]
pub(crate) fn agrees_somewhere(x: &[Color], y: &[Color]) -> bool {
    x.iter().zip(y).any(|(a, b)| a == b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallCertificate {
    pub center: Word,
    pub radius: usize,
    pub members: Vec<Word>,
}

impl BallCertificate {
    /// Re-checks every member distance.
    pub fn validate(&self) -> bool {
        self.members.iter().all(|w| {
            hamming_distance(w, &self.center)
                .map(|d| d <= self.radius)
                .unwrap_or(false)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterMode {
    /// Diagonal center; needs at most `m` vectors.
    Trivial,
    /// Uniform random centers until one works. `cap` defaults to
    /// `64 * ceil(e^{m/q})` attempts.
    Probabilistic { seed: u64, cap: Option<u64> },
    /// Scan all `q^m` centers; returns the lexicographically smallest.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterSearch {
    Found(BallCertificate),
    /// Exhaustive scan proved no radius-(m-1) ball contains the set.
    NoCenter,
    /// The probabilistic attempt cap ran out.
    GaveUp {
        attempts: u64,
    },
}

impl CenterSearch {
    pub fn certificate(self) -> Option<BallCertificate> {
        match self {
            CenterSearch::Found(c) => Some(c),
            _ => None,
        }
    }
}

pub fn default_probabilistic_cap(m: usize, q: usize) -> u64 {
    let e = (m as f64 / q as f64).exp().ceil();
    if e >= (u64::MAX / 64) as f64 {
        u64::MAX
    } else {
        64 * e as u64
    }
}

/// Finds a center `a` with every vector within distance `m - 1` of it.
pub fn find_center(vectors: &[Word], m: usize, q: usize, mode: CenterMode) -> Result<CenterSearch> {
    if m == 0 {
        return param("word length must be >= 1");
    }
    if q == 0 || q > Color::MAX as usize + 1 {
        return param(format!("alphabet size {q} out of range"));
    }
    for v in vectors {
        if v.len() != m {
            return param(format!("vector of length {} where {m} expected", v.len()));
        }
        if !check_word(v, q) {
            return param(format!("vector {v:?} has entries outside 0..{q}"));
        }
    }
    let found = |center: Word| {
        CenterSearch::Found(BallCertificate {
            center,
            radius: m - 1,
            members: vectors.to_vec(),
        })
    };
    match mode {
        CenterMode::Trivial => {
            if vectors.len() > m {
                return Err(Error::Precondition(format!(
                    "trivial center needs at most {m} vectors, got {}",
                    vectors.len()
                )));
            }
            Ok(found(trivial_center(vectors, m)))
        }
        CenterMode::Probabilistic { seed, cap } => {
            let cap = cap.unwrap_or_else(|| default_probabilistic_cap(m, q));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut center = vec![0; m];
            for _ in 0..cap {
                for c in center.iter_mut() {
                    *c = rng.gen_range(0..q) as Color;
                }
                if vectors.iter().all(|v| agrees_somewhere(v, &center)) {
                    return Ok(found(center));
                }
            }
            Ok(CenterSearch::GaveUp { attempts: cap })
        }
        CenterMode::Exhaustive => Ok(match exhaustive_center(vectors, m, q) {
            Some(c) => found(c),
            None => CenterSearch::NoCenter,
        }),
    }
}

/// `a_i` = i-th coordinate of the i-th vector, zero-padded.
pub(crate) fn trivial_center(vectors: &[Word], m: usize) -> Word {
    let mut center = vec![0; m];
    for (i, v) in vectors.iter().enumerate().take(m) {
        center[i] = v[i];
    }
    center
}

pub(crate) fn exhaustive_center(vectors: &[Word], m: usize, q: usize) -> Option<Word> {
    let mut center = vec![0; m];
    loop {
        if vectors.iter().all(|v| agrees_somewhere(v, &center)) {
            return Some(center);
        }
        if !next_word(&mut center, q) {
            return None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::all_words;
    use proptest::prelude::*;

    #[test]
    fn distance_examples() {
        assert_eq!(hamming_distance(&[0, 1, 2], &[0, 2, 2]).unwrap(), 1);
        assert_eq!(hamming_distance(&[1, 2, 3], &[1, 2, 3]).unwrap(), 0);
        assert_eq!(hamming_distance(&[0, 0], &[1, 1]).unwrap(), 2);
        assert!(hamming_distance(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn trivial_diagonal_center() {
        // Colors here are 0-based; the words are taken verbatim.
        let vs = vec![vec![1, 2], vec![3, 4]];
        let cert = find_center(&vs, 2, 5, CenterMode::Trivial)
            .unwrap()
            .certificate()
            .unwrap();
        assert_eq!(cert.center, vec![1, 4]);
        assert_eq!(cert.radius, 1);
        assert!(cert.validate());
        for v in &vs {
            assert_eq!(hamming_distance(v, &cert.center).unwrap(), 1);
        }
    }

    #[test]
    fn trivial_rejects_too_many() {
        let vs = vec![vec![0, 0], vec![0, 1], vec![1, 0]];
        assert!(matches!(
            find_center(&vs, 2, 2, CenterMode::Trivial),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn exhaustive_full_cube_has_no_center() {
        let vs: Vec<Word> = all_words(2, 2).collect();
        assert_eq!(
            find_center(&vs, 2, 2, CenterMode::Exhaustive).unwrap(),
            CenterSearch::NoCenter
        );
    }

    #[test]
    fn exhaustive_is_lex_smallest() {
        let vs = vec![vec![1, 1], vec![1, 0]];
        let cert = find_center(&vs, 2, 2, CenterMode::Exhaustive)
            .unwrap()
            .certificate()
            .unwrap();
        assert_eq!(cert.center, vec![1, 0]);
    }

    #[test]
    fn probabilistic_single_vector() {
        let vs = vec![vec![2, 0, 1]];
        let cert = find_center(&vs, 3, 3, CenterMode::Probabilistic { seed: 9, cap: None })
            .unwrap()
            .certificate()
            .unwrap();
        assert!(cert.validate());
    }

    #[test]
    fn probabilistic_gives_up_when_impossible() {
        let vs: Vec<Word> = all_words(2, 2).collect();
        let out = find_center(&vs, 2, 2, CenterMode::Probabilistic { seed: 1, cap: Some(50) }).unwrap();
        assert_eq!(out, CenterSearch::GaveUp { attempts: 50 });
    }

    fn word(m: usize, q: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0..q as u8, m)
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(
            (x, y, z) in (1usize..8, 2usize..5).prop_flat_map(|(m, q)| (word(m, q), word(m, q), word(m, q)))
        ) {
            let dxy = hamming_distance(&x, &y).unwrap();
            prop_assert_eq!(dxy, hamming_distance(&y, &x).unwrap());
            prop_assert_eq!(dxy == 0, x == y);
            let dxz = hamming_distance(&x, &z).unwrap();
            let dzy = hamming_distance(&z, &y).unwrap();
            prop_assert!(dxy <= dxz + dzy);
        }

        #[test]
        fn at_most_m_words_always_fit(
            (m, q, vs) in (1usize..7, 2usize..6).prop_flat_map(|(m, q)| {
                (Just(m), Just(q), proptest::collection::vec(word(m, q), 0..=m))
            })
        ) {
            let cert = find_center(&vs, m, q, CenterMode::Trivial).unwrap().certificate().unwrap();
            prop_assert!(cert.validate());
        }

        #[test]
        fn small_sets_below_exp_bound_have_centers(
            (m, q, vs) in (2usize..7, 2usize..4).prop_flat_map(|(m, q)| {
                let bound = (m as f64 / q as f64).exp().floor() as usize;
                (Just(m), Just(q), proptest::collection::vec(word(m, q), 0..=bound))
            })
        ) {
            let out = find_center(&vs, m, q, CenterMode::Exhaustive).unwrap();
            let cert = out.certificate();
            prop_assert!(cert.is_some());
            prop_assert!(cert.unwrap().validate());
        }
    }
}
