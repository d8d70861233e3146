//! Rigged configurations and the Kerov-Kirillov-Reshetikhin bijection for
//! highest states in `B_1^{(x) L}`.
//!
//! A rigged configuration is a partition `mu = (i_1 <= ... <= i_g)` of the
//! ball number `M` together with one integer rigging `0 <= J_i <= p_i` per
//! part, where
//!
//! ```text
//! p_i = L - 2 * sum_{j in mu} min(i, j)
//! ```
//!
//! is the vacancy number. The forward map scans the word left to right and
//! grows strings at each ball; the inverse scan runs right to left and
//! shrinks them. A string is *singular* when its rigging equals the vacancy
//! number for its length at the current scan position; the fictitious
//! length-0 string (vacancy 0, rigging 0) is always singular and seeds new
//! strings.

use std::fmt::Write as _;

use crate::crystal::{Letter, State};
use crate::error::{Error, Result};

/// Vacancy numbers `p_i` of `mu` at system size `L`, one per part.
///
/// Fails with `NegativeVacancy` when `L < 2 * sum(mu)`.
pub fn vacancy_numbers(parts: &[u32], system_size: usize) -> Result<Vec<i64>> {
    parts
        .iter()
        .map(|&i| {
            let v = vacancy(i, system_size as i64, parts.iter().copied());
            if v < 0 {
                Err(Error::NegativeVacancy { part: i, vacancy: v, system_size })
            } else {
                Ok(v)
            }
        })
        .collect()
}

/// Vacancy of a string of length `len` when `letters` letters are scanned,
/// against the partition `nu`. Length 0 has vacancy 0 by convention.
fn vacancy(len: u32, letters: i64, nu: impl Iterator<Item = u32>) -> i64 {
    if len == 0 {
        return 0;
    }
    letters - 2 * nu.map(|j| i64::from(len.min(j))).sum::<i64>()
}

/// A partition with riggings, the image of the KKR map.
///
/// Stored canonically: parts weakly increasing, and riggings weakly
/// increasing within each block of equal parts (the ordering inside a block
/// carries no information). Equality is equality of the canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RiggedConfiguration {
    system_size: usize,
    parts: Vec<u32>,
    riggings: Vec<i64>,
}

impl RiggedConfiguration {
    /// Builds and validates: positive parts, `L >= 2 sum(mu)`, and
    /// `0 <= J_i <= p_i` for every part. Input order is irrelevant.
    pub fn new(system_size: usize, parts: Vec<u32>, riggings: Vec<i64>) -> Result<Self> {
        if parts.len() != riggings.len() {
            return Err(Error::DimensionMismatch { expected: parts.len(), got: riggings.len() });
        }
        if parts.contains(&0) {
            return Err(Error::ZeroPart);
        }
        let mut rows: Vec<(u32, i64)> = parts.into_iter().zip(riggings).collect();
        rows.sort_unstable();
        let parts: Vec<u32> = rows.iter().map(|r| r.0).collect();
        let riggings: Vec<i64> = rows.iter().map(|r| r.1).collect();
        let vacancies = vacancy_numbers(&parts, system_size)?;
        for ((&part, &rigging), &vacancy) in parts.iter().zip(&riggings).zip(&vacancies) {
            if rigging < 0 || rigging > vacancy {
                return Err(Error::InvalidRigging { part, rigging, vacancy });
            }
        }
        Ok(RiggedConfiguration { system_size, parts, riggings })
    }

    /// The empty configuration of the vacuum state.
    pub fn empty(system_size: usize) -> Self {
        RiggedConfiguration { system_size, parts: Vec::new(), riggings: Vec::new() }
    }

    pub fn system_size(&self) -> usize {
        self.system_size
    }

    /// Parts in weakly increasing order.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Riggings aligned with `parts()`.
    pub fn riggings(&self) -> &[i64] {
        &self.riggings
    }

    /// `g`, the number of strings.
    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// `M = i_1 + ... + i_g`.
    pub fn ball_count(&self) -> usize {
        self.parts.iter().map(|&i| i as usize).sum()
    }

    pub fn vacancies(&self) -> Vec<i64> {
        vacancy_numbers(&self.parts, self.system_size)
            .expect("vacancies validated at construction")
    }

    pub fn has_distinct_parts(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] < w[1])
    }

    /// Serializes to the line-oriented text format:
    ///
    /// ```text
    /// L = 14
    /// mu = 1 2 3
    /// rigging = 0 4 1
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "L = {}", self.system_size);
        let _ = writeln!(
            out,
            "mu ={}",
            self.parts.iter().fold(String::new(), |mut s, p| {
                let _ = write!(s, " {p}");
                s
            })
        );
        let _ = writeln!(
            out,
            "rigging ={}",
            self.riggings.iter().fold(String::new(), |mut s, r| {
                let _ = write!(s, " {r}");
                s
            })
        );
        out
    }

    /// Parses the `to_text` format; round trips bit-exactly.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut system_size = None;
        let mut parts: Option<Vec<u32>> = None;
        let mut riggings: Option<Vec<i64>> = None;
        let mut offset = 0usize;
        for line in text.lines() {
            let position = offset;
            offset += line.len() + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                position,
                message: "expected `key = value`".into(),
            })?;
            let parse_err = |message: String| Error::Parse { position, message };
            match key.trim() {
                "L" => {
                    system_size = Some(
                        value
                            .trim()
                            .parse::<usize>()
                            .map_err(|e| parse_err(format!("bad system size: {e}")))?,
                    );
                }
                "mu" => {
                    parts = Some(
                        value
                            .split_whitespace()
                            .map(|t| t.parse::<u32>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|e| parse_err(format!("bad part: {e}")))?,
                    );
                }
                "rigging" => {
                    riggings = Some(
                        value
                            .split_whitespace()
                            .map(|t| t.parse::<i64>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|e| parse_err(format!("bad rigging: {e}")))?,
                    );
                }
                other => {
                    return Err(parse_err(format!("unknown field {other:?}")));
                }
            }
        }
        let system_size = system_size.ok_or(Error::Parse {
            position: 0,
            message: "missing field L".into(),
        })?;
        RiggedConfiguration::new(
            system_size,
            parts.unwrap_or_default(),
            riggings.unwrap_or_default(),
        )
    }
}

/// Working string list for the two scans, kept sorted by (length, rigging).
type Strings = Vec<(u32, i64)>;

fn string_lengths(strings: &Strings) -> impl Iterator<Item = u32> + '_ {
    strings.iter().map(|s| s.0)
}

/// The KKR bijection `phi` from a highest state to its rigged configuration.
///
/// Scanning letters `k = 1..=L`: a ball lengthens the longest string that is
/// singular with respect to the vacancies at `k - 1` letters (the fictitious
/// length-0 string is always available) and the grown string is made
/// singular with respect to the vacancies at `k` letters.
pub fn kkr_forward(state: &State) -> Result<RiggedConfiguration> {
    kkr_forward_with_tie(state, TieChoice::Topmost)
}

/// Which of several equal-length singular strings the forward scan grows.
/// All of them carry the same rigging, so the resulting configuration does
/// not depend on the choice; a test sweeps both to pin that down.
#[derive(Clone, Copy, PartialEq, Eq)]
#[cfg_attr(not(test), allow(dead_code))]
enum TieChoice {
    Topmost,
    Bottommost,
}

fn kkr_forward_with_tie(state: &State, tie: TieChoice) -> Result<RiggedConfiguration> {
    if !state.is_highest() {
        return Err(Error::NotHighest);
    }
    let mut strings: Strings = Vec::new();
    for (pos, &letter) in state.letters().iter().enumerate() {
        if !letter.is_ball() {
            continue;
        }
        let scanned = pos as i64; // k - 1 letters precede this one
        // Longest singular string, topmost in its block (last stored) under
        // the default tie rule.
        let singular = strings
            .iter()
            .enumerate()
            .filter(|(_, &(len, rig))| rig == vacancy(len, scanned, string_lengths(&strings)));
        let selected = match tie {
            TieChoice::Topmost => singular.map(|(idx, _)| idx).next_back(),
            TieChoice::Bottommost => {
                let longest = singular.clone().map(|(_, &(len, _))| len).max();
                singular
                    .filter(|(_, &(len, _))| Some(len) == longest)
                    .map(|(idx, _)| idx)
                    .next()
            }
        };
        match selected {
            Some(idx) => {
                let len = strings[idx].0 + 1;
                strings[idx] = (len, 0);
                let rig = vacancy(len, scanned + 1, string_lengths(&strings));
                strings[idx] = (len, rig);
            }
            None => {
                // Fictitious length-0 string: start a new string of length 1.
                strings.push((1, 0));
                let rig = vacancy(1, scanned + 1, string_lengths(&strings));
                let last = strings.len() - 1;
                strings[last] = (1, rig);
            }
        }
        strings.sort_unstable();
    }
    let (parts, riggings) = strings.into_iter().unzip();
    RiggedConfiguration::new(state.len(), parts, riggings)
}

/// The inverse KKR scan, from a rigged configuration back to the highest
/// state.
///
/// Scanning boxes `k = L..=1` downward: if some string is singular with
/// respect to the vacancies at `k` letters, the box holds a ball; the
/// shortest singular string shrinks by one and is made singular with respect
/// to the vacancies at `k - 1` letters.
pub fn kkr_inverse(rc: &RiggedConfiguration) -> Result<State> {
    let mut strings: Strings = rc.parts().iter().copied().zip(rc.riggings().iter().copied()).collect();
    let mut letters = vec![Letter::Empty; rc.system_size()];
    for k in (1..=rc.system_size()).rev() {
        let selected = strings
            .iter()
            .enumerate()
            .filter(|(_, &(len, rig))| rig == vacancy(len, k as i64, string_lengths(&strings)))
            .map(|(idx, _)| idx)
            .next();
        let Some(idx) = selected else { continue };
        letters[k - 1] = Letter::Ball;
        let (len, _) = strings[idx];
        if len == 1 {
            strings.remove(idx);
        } else {
            strings[idx] = (len - 1, 0);
            let rig = vacancy(len - 1, k as i64 - 1, string_lengths(&strings));
            strings[idx] = (len - 1, rig);
            strings.sort_unstable();
        }
    }
    if !strings.is_empty() {
        // A validated configuration always consumes every string.
        return Err(Error::InternalSingularityFailure { position: 0 });
    }
    State::new(letters)
}

/// The rigged configuration of a concatenation `q (x) r` of highest states,
/// given the configurations of the factors.
///
/// The left factor keeps its riggings; each rigging of the right factor is
/// shifted by the vacancy number of its length in the left configuration:
/// `J'_j = J_j + (K - 2 sum_{k in lambda} min(j, k))`.
pub fn concat_rc(
    left: &RiggedConfiguration,
    right: &RiggedConfiguration,
) -> Result<RiggedConfiguration> {
    let left_size = left.system_size() as i64;
    let mut parts: Vec<u32> = left.parts().to_vec();
    let mut riggings: Vec<i64> = left.riggings().to_vec();
    for (&j, &rig) in right.parts().iter().zip(right.riggings()) {
        let shift = vacancy(j, left_size, left.parts().iter().copied());
        parts.push(j);
        riggings.push(rig + shift);
    }
    RiggedConfiguration::new(left.system_size() + right.system_size(), parts, riggings)
}

/// Splits `p = T_1^d(p_+)` with `p_+` highest, picking the smallest
/// `d in [0, L)`.
pub fn decompose_to_highest(state: &State) -> Result<(usize, State)> {
    for d in 0..state.len() {
        let rotated = state.cyclic_shift(-(d as i64));
        if rotated.is_highest() {
            return Ok((d, rotated));
        }
    }
    Err(Error::NoHighestRotation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> State {
        s.parse().unwrap()
    }

    fn rc(l: usize, parts: &[u32], riggings: &[i64]) -> RiggedConfiguration {
        RiggedConfiguration::new(l, parts.to_vec(), riggings.to_vec()).unwrap()
    }

    #[test]
    fn vacancy_examples() {
        assert_eq!(vacancy_numbers(&[1, 2, 3], 14).unwrap(), vec![8, 4, 2]);
        assert_eq!(vacancy_numbers(&[2, 6], 170).unwrap(), vec![162, 154]);
        assert_eq!(vacancy_numbers(&[1], 4).unwrap(), vec![2]);
        assert!(matches!(
            vacancy_numbers(&[2, 3], 9),
            Err(Error::NegativeVacancy { .. })
        ));
    }

    #[test]
    fn vacancies_weakly_decrease() {
        let v = vacancy_numbers(&[1, 2, 3], 14).unwrap();
        assert!(v.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn forward_examples() {
        assert_eq!(kkr_forward(&State::vacuum(5)).unwrap(), RiggedConfiguration::empty(5));
        assert_eq!(kkr_forward(&st("12")).unwrap(), rc(2, &[1], &[0]));
        assert_eq!(
            kkr_forward(&st("12111122211122")).unwrap(),
            rc(14, &[1, 2, 3], &[0, 4, 1])
        );
        assert!(matches!(kkr_forward(&st("21")), Err(Error::NotHighest)));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            kkr_inverse(&rc(14, &[1, 2, 3], &[8, 4, 1])).unwrap().to_string(),
            "11112221112212"
        );
        assert_eq!(
            kkr_inverse(&rc(14, &[1, 2, 3], &[6, 0, 1])).unwrap().to_string(),
            "11221111221221"
        );
        assert_eq!(
            kkr_inverse(&RiggedConfiguration::empty(5)).unwrap().to_string(),
            "11111"
        );
    }

    #[test]
    fn rigging_bounds_enforced() {
        assert!(matches!(
            RiggedConfiguration::new(14, vec![1, 2, 3], vec![9, 4, 1]),
            Err(Error::InvalidRigging { part: 1, rigging: 9, vacancy: 8 })
        ));
        assert!(matches!(
            RiggedConfiguration::new(4, vec![1], vec![-1]),
            Err(Error::InvalidRigging { .. })
        ));
        assert!(matches!(
            RiggedConfiguration::new(4, vec![0], vec![0]),
            Err(Error::ZeroPart)
        ));
    }

    #[test]
    fn round_trip_small() {
        for l in 1..=10usize {
            for bits in 0..(1u32 << l) {
                let letters: Vec<Letter> = (0..l)
                    .map(|i| if bits >> i & 1 == 1 { Letter::Ball } else { Letter::Empty })
                    .collect();
                let Ok(p) = State::new(letters) else { continue };
                if !p.is_highest() {
                    continue;
                }
                let rc = kkr_forward(&p).unwrap();
                assert_eq!(kkr_inverse(&rc).unwrap(), p, "round trip of {p}");
            }
        }
    }

    #[test]
    fn concat_examples() {
        // Doubling the worked three-soliton configuration.
        let a = rc(14, &[1, 2, 3], &[0, 4, 1]);
        let doubled = concat_rc(&a, &a).unwrap();
        assert_eq!(doubled.system_size(), 28);
        assert_eq!(doubled.parts(), &[1, 1, 2, 2, 3, 3]);
        assert_eq!(doubled.riggings(), &[0, 8, 4, 8, 1, 3]);

        // Empty left factor shifts by K.
        let empty = RiggedConfiguration::empty(6);
        let shifted = concat_rc(&empty, &rc(14, &[1, 2, 3], &[0, 4, 1])).unwrap();
        assert_eq!(shifted.riggings(), &[6, 10, 7]);

        // Block merge keeps riggings sorted within blocks.
        let left = rc(20, &[2, 2], &[0, 5]);
        let right = rc(14, &[2, 3], &[2, 3]);
        let joined = concat_rc(&left, &right).unwrap();
        assert_eq!(joined.parts(), &[2, 2, 2, 3]);
        // Right-factor vacancies in `left`: p_2 = 20 - 2*4 = 12, p_3 = 20 - 8 = 12.
        assert_eq!(joined.riggings(), &[0, 5, 14, 15]);

        // Union display convention: merging {2,2: 0,5} with already-shifted
        // {2: 2, 3: 7} sorts the length-2 block to {0, 2, 5}.
        let merged = RiggedConfiguration::new(28, vec![2, 3, 2, 2], vec![2, 7, 0, 5]).unwrap();
        assert_eq!(merged.parts(), &[2, 2, 2, 3]);
        assert_eq!(merged.riggings(), &[0, 2, 5, 7]);
    }

    #[test]
    fn concat_agrees_with_forward_on_tensor_product() {
        let q = st("112112");
        let r = st("1212");
        let mut letters = q.letters().to_vec();
        letters.extend_from_slice(r.letters());
        let qr = State::new(letters).unwrap();
        assert_eq!(
            concat_rc(&kkr_forward(&q).unwrap(), &kkr_forward(&r).unwrap()).unwrap(),
            kkr_forward(&qr).unwrap()
        );
    }

    #[test]
    fn decompose_examples() {
        let (d, plus) = decompose_to_highest(&st("22121111222111")).unwrap();
        assert_eq!((d, plus.to_string().as_str()), (2, "12111122211122"));

        let hp = st("12111122211122");
        assert_eq!(decompose_to_highest(&hp).unwrap(), (0, hp.clone()));

        assert_eq!(decompose_to_highest(&st("21")).unwrap(), (1, st("12")));
    }

    #[test]
    fn forward_is_independent_of_tie_choice() {
        for l in 1..=12usize {
            for bits in 0..(1u32 << l) {
                let letters: Vec<Letter> = (0..l)
                    .map(|i| if bits >> i & 1 == 1 { Letter::Ball } else { Letter::Empty })
                    .collect();
                let Ok(p) = State::new(letters) else { continue };
                if !p.is_highest() {
                    continue;
                }
                assert_eq!(
                    kkr_forward_with_tie(&p, TieChoice::Topmost).unwrap(),
                    kkr_forward_with_tie(&p, TieChoice::Bottommost).unwrap(),
                    "tie choice changed the configuration of {p}"
                );
            }
        }
    }

    #[test]
    fn text_format_round_trip() {
        let a = rc(14, &[1, 2, 3], &[0, 4, 1]);
        let text = a.to_text();
        assert_eq!(text, "L = 14\nmu = 1 2 3\nrigging = 0 4 1\n");
        assert_eq!(RiggedConfiguration::from_text(&text).unwrap(), a);
        assert_eq!(RiggedConfiguration::from_text(&text).unwrap().to_text(), text);

        let empty = RiggedConfiguration::empty(7);
        assert_eq!(RiggedConfiguration::from_text(&empty.to_text()).unwrap(), empty);

        assert!(matches!(
            RiggedConfiguration::from_text("L = x"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn canonical_block_order() {
        let a = RiggedConfiguration::new(20, vec![2, 1, 2], vec![5, 3, 0]).unwrap();
        assert_eq!(a.parts(), &[1, 2, 2]);
        assert_eq!(a.riggings(), &[3, 0, 5]);
        // Equality ignores input order inside blocks.
        let b = RiggedConfiguration::new(20, vec![2, 2, 1], vec![0, 5, 3]).unwrap();
        assert_eq!(a, b);
    }
}
