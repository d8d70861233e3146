//! States of the periodic box-ball system and the carrier dynamics.
//!
//! A state is a cyclic word over {1, 2} where 1 is an empty box and 2 a box
//! holding a ball. The time evolution `T_l` transports a capacity-`l`
//! carrier around the ring; each box interaction is one application of the
//! combinatorial R on `B_l (x) B_1`:
//!
//! ```text
//! (x1, x2) (x) 1  ->  1 (x) (l, 0)           if (x1, x2) = (l, 0)
//!                     2 (x) (x1+1, x2-1)     otherwise
//! (x1, x2) (x) 2  ->  2 (x) (0, l)           if (x1, x2) = (0, l)
//!                     1 (x) (x1-1, x2+1)     otherwise
//! ```
//!
//! `x1` counts empty slots, `x2` balls. In ball terms: the carrier drops a
//! ball into an empty box unless it is empty itself, and picks a ball up
//! unless it is full.
//!
//! All values are immutable; every operation returns a fresh state.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One box: empty (`1`) or holding a ball (`2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Empty,
    Ball,
}

impl Letter {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '1' => Ok(Letter::Empty),
            '2' => Ok(Letter::Ball),
            other => Err(Error::BadLetter(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::Empty => '1',
            Letter::Ball => '2',
        }
    }

    pub fn is_ball(self) -> bool {
        self == Letter::Ball
    }
}

/// An element of `B_l`: a carrier of capacity `l` holding `balls` balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Carrier {
    capacity: u32,
    balls: u32,
}

impl Carrier {
    /// The initial carrier `u_l = (l, 0)`.
    pub fn new(capacity: u32) -> Self {
        assert!(capacity >= 1, "carrier capacity must be positive");
        Carrier { capacity, balls: 0 }
    }

    /// A carrier in an arbitrary admissible configuration.
    pub fn with_balls(capacity: u32, balls: u32) -> Self {
        assert!(capacity >= 1 && balls <= capacity);
        Carrier { capacity, balls }
    }

    pub fn capacity(self) -> u32 {
        self.capacity
    }

    /// `x1`, the number of empty slots.
    pub fn empties(self) -> u32 {
        self.capacity - self.balls
    }

    /// `x2`, the number of balls.
    pub fn balls(self) -> u32 {
        self.balls
    }
}

/// The combinatorial R on `B_l (x) B_1`, one carrier/box interaction.
///
/// Total on valid inputs and a bijection onto `B_1 (x) B_l`.
pub fn apply_r(carrier: Carrier, letter: Letter) -> (Letter, Carrier) {
    let Carrier { capacity, balls } = carrier;
    match letter {
        Letter::Empty => {
            if balls == 0 {
                (Letter::Empty, carrier)
            } else {
                (Letter::Ball, Carrier { capacity, balls: balls - 1 })
            }
        }
        Letter::Ball => {
            if balls == capacity {
                (Letter::Ball, carrier)
            } else {
                (Letter::Empty, Carrier { capacity, balls: balls + 1 })
            }
        }
    }
}

/// A state of the periodic box-ball system: a word over {1, 2} of length
/// `L >= 1` with at most `L / 2` balls. Position 1 is the leftmost factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    letters: Vec<Letter>,
}

impl State {
    /// Validates `L >= 1` and `L >= 2 M`; the dynamics is undefined outside
    /// that range, so it is rejected at construction.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyState);
        }
        let balls = letters.iter().filter(|b| b.is_ball()).count();
        if letters.len() < 2 * balls {
            return Err(Error::TooManyBalls { len: letters.len(), balls });
        }
        Ok(State { letters })
    }

    /// The vacuum `1^L`.
    pub fn vacuum(len: usize) -> Self {
        assert!(len >= 1);
        State { letters: vec![Letter::Empty; len] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// `M`, the number of balls.
    pub fn ball_count(&self) -> usize {
        self.letters.iter().filter(|b| b.is_ball()).count()
    }

    /// True iff every prefix holds at least as many empty boxes as balls.
    pub fn is_highest(&self) -> bool {
        let mut excess = 0i64;
        for b in &self.letters {
            excess += if b.is_ball() { -1 } else { 1 };
            if excess < 0 {
                return false;
            }
        }
        true
    }

    /// `T_1^d`: cyclic rotation moving the last `d` letters to the front.
    /// `d` may be negative.
    pub fn cyclic_shift(&self, d: i64) -> State {
        let len = self.letters.len() as i64;
        let d = d.rem_euclid(len) as usize;
        if d == 0 {
            return self.clone();
        }
        let split = self.letters.len() - d;
        let mut letters = Vec::with_capacity(self.letters.len());
        letters.extend_from_slice(&self.letters[split..]);
        letters.extend_from_slice(&self.letters[..split]);
        State { letters }
    }

    fn pass(&self, start: Carrier) -> (Vec<Letter>, Carrier) {
        let mut carrier = start;
        let mut out = Vec::with_capacity(self.letters.len());
        for &b in &self.letters {
            let (b2, c2) = apply_r(carrier, b);
            out.push(b2);
            carrier = c2;
        }
        (out, carrier)
    }

    /// One carrier pass `u_l (x) p ~ p* (x) v_l` from the initial carrier
    /// `u_l = (l, 0)`. Returns the emitted word `p*` and the final carrier
    /// `v_l`.
    pub fn carrier_pass(&self, capacity: u32) -> (State, Carrier) {
        let (letters, carrier) = self.pass(Carrier::new(capacity));
        (State { letters }, carrier)
    }

    /// The time evolution `T_l`, via `v_l (x) p ~ T_l(p) (x) v_l`.
    ///
    /// The second pass must return the carrier `v_l` it started from; that
    /// is checked on every call rather than trusted.
    pub fn time_evolution(&self, capacity: u32) -> Result<State> {
        let (_, v) = self.pass(Carrier::new(capacity));
        let (letters, v2) = self.pass(v);
        if v2 != v {
            return Err(Error::WellDefinednessViolation {
                expected: v.balls(),
                got: v2.balls(),
            });
        }
        Ok(State { letters })
    }

    /// `T_l^t` by iterated carrier passes.
    pub fn evolve(&self, capacity: u32, steps: u64) -> Result<State> {
        let mut state = self.clone();
        for _ in 0..steps {
            state = state.time_evolution(capacity)?;
        }
        Ok(state)
    }
}

impl FromStr for State {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s.chars().map(Letter::from_char).collect::<Result<Vec<_>>>()?;
        State::new(letters)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.letters {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> State {
        s.parse().unwrap()
    }

    #[test]
    fn r_map_four_cases() {
        // (3,0) (x) 1 -> 1 (x) (3,0)
        assert_eq!(
            apply_r(Carrier::with_balls(3, 0), Letter::Empty),
            (Letter::Empty, Carrier::with_balls(3, 0))
        );
        // (1,1) (x) 1 -> 2 (x) (2,0)
        assert_eq!(
            apply_r(Carrier::with_balls(2, 1), Letter::Empty),
            (Letter::Ball, Carrier::with_balls(2, 0))
        );
        // (0,2) (x) 2 -> 2 (x) (0,2)
        assert_eq!(
            apply_r(Carrier::with_balls(2, 2), Letter::Ball),
            (Letter::Ball, Carrier::with_balls(2, 2))
        );
        // (2,1) (x) 2 -> 1 (x) (1,2)
        assert_eq!(
            apply_r(Carrier::with_balls(3, 1), Letter::Ball),
            (Letter::Empty, Carrier::with_balls(3, 2))
        );
    }

    #[test]
    fn r_is_a_bijection_up_to_capacity_six() {
        for l in 1..=6u32 {
            let mut seen = std::collections::HashSet::new();
            for balls in 0..=l {
                for b in [Letter::Empty, Letter::Ball] {
                    let (b2, c2) = apply_r(Carrier::with_balls(l, balls), b);
                    assert_eq!(c2.capacity(), l);
                    assert!(seen.insert((b2, c2.balls())));
                }
            }
            assert_eq!(seen.len() as u32, 2 * (l + 1));
        }
    }

    #[test]
    fn carrier_pass_capacity_one_rotates() {
        // R is the identity on B_1 (x) B_1: emits u_1 then b_1 .. b_{L-1},
        // and the final carrier is the last letter.
        let (out, v) = st("121121").carrier_pass(1);
        assert_eq!(out.to_string(), "112112");
        assert_eq!(v.balls(), 0);

        let (out, v) = st("1212").carrier_pass(1);
        assert_eq!(out.to_string(), "1121");
        assert_eq!(v.balls(), 1);
    }

    #[test]
    fn carrier_pass_capacity_two() {
        let (out, v) = st("1212").carrier_pass(2);
        assert_eq!(out.to_string(), "1121");
        assert_eq!((v.empties(), v.balls()), (1, 1));

        let (out, v) = st("1111").carrier_pass(2);
        assert_eq!(out.to_string(), "1111");
        assert_eq!((v.empties(), v.balls()), (2, 0));
    }

    #[test]
    fn time_evolution_matches_printed_rows() {
        let p = st("11211122211122");
        assert_eq!(p.time_evolution(2).unwrap().to_string(), "22121111222111");
        assert_eq!(p.time_evolution(3).unwrap().to_string(), "22121111122211");
    }

    #[test]
    fn t1_is_the_cyclic_shift() {
        for s in ["11211122211122", "1212", "112"] {
            let p = st(s);
            assert_eq!(p.time_evolution(1).unwrap(), p.cyclic_shift(1));
        }
    }

    #[test]
    fn cyclic_shift_edges() {
        let p = st("12111122211122");
        assert_eq!(p.cyclic_shift(2).to_string(), "22121111222111");
        assert_eq!(p.cyclic_shift(0), p);
        assert_eq!(p.cyclic_shift(p.len() as i64), p);
        assert_eq!(p.cyclic_shift(-3).cyclic_shift(3), p);
    }

    #[test]
    fn highest_predicate() {
        assert!(st("11211122211122").is_highest());
        assert!(!st("22121111222111").is_highest());
        assert!(st("1111").is_highest());
    }

    #[test]
    fn ball_counts() {
        assert_eq!(st("11211122211122").ball_count(), 6);
        assert_eq!(st("1111").ball_count(), 0);
        let mut s = String::from("1122111111222222");
        s.push_str(&"1".repeat(154));
        assert_eq!(st(&s).ball_count(), 8);
    }

    #[test]
    fn construction_guards() {
        assert!(matches!("".parse::<State>(), Err(Error::EmptyState)));
        assert!(matches!("13".parse::<State>(), Err(Error::BadLetter('3'))));
        assert!(matches!(
            "221".parse::<State>(),
            Err(Error::TooManyBalls { len: 3, balls: 2 })
        ));
        // Equality L = 2M is allowed.
        assert!("1212".parse::<State>().is_ok());
    }

    #[test]
    fn evolution_preserves_balls() {
        let p = st("11211122211122");
        for l in 1..=5 {
            assert_eq!(p.time_evolution(l).unwrap().ball_count(), p.ball_count());
        }
    }

    #[test]
    fn evolutions_commute_on_a_sample() {
        let p = st("11212211112221");
        for k in 1..=4 {
            for l in 1..=4 {
                let a = p.time_evolution(k).unwrap().time_evolution(l).unwrap();
                let b = p.time_evolution(l).unwrap().time_evolution(k).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn saturation_above_largest_soliton() {
        // mu = {1, 2, 3} for this state, so T_l = T_3 for l >= 3.
        let p = st("11211122211122");
        let t3 = p.time_evolution(3).unwrap();
        for l in 4..=7 {
            assert_eq!(p.time_evolution(l).unwrap(), t3);
        }
    }
}
