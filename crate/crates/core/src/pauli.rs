//! Pauli words in the symplectic (x, z) bit encoding and their phases.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest qubit count a [`PauliWord`] can hold.
pub const MAX_QUBITS: usize = 64;

/// Single-site letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    pub const NON_IDENTITY: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// A power of the imaginary unit, `i^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn new(exponent: i64) -> Phase {
        Phase(exponent.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// A tensor product of single-qubit Paulis on `n` sites.
///
/// Site `j` (0-based, leftmost letter) is stored in bit `j` of the two masks.
/// `Y` is the Hermitian Pauli, so `Y = i X Z` in terms of the masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n: u8,
    x: u64,
    z: u64,
}

impl PauliWord {
    pub fn identity(n: usize) -> PauliWord {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        PauliWord { n: n as u8, x: 0, z: 0 }
    }

    /// Word with `letter` on `site` and identities elsewhere.
    pub fn single(n: usize, site: usize, letter: Letter) -> PauliWord {
        let mut w = PauliWord::identity(n);
        w.set(site, letter);
        w
    }

    pub fn from_letters(letters: &[Letter]) -> Result<PauliWord> {
        if letters.len() > MAX_QUBITS {
            return Err(Error::Resource {
                what: "pauli word length",
                requested: letters.len(),
                cap: MAX_QUBITS,
            });
        }
        let mut w = PauliWord::identity(letters.len());
        for (j, &l) in letters.iter().enumerate() {
            w.set(j, l);
        }
        Ok(w)
    }

    /// Raw masks; bits at or above `n` must be clear.
    pub fn from_masks(n: usize, x: u64, z: u64) -> PauliWord {
        assert!(n <= MAX_QUBITS);
        let mask = site_mask(n);
        assert!(x & !mask == 0 && z & !mask == 0, "mask bits beyond n");
        PauliWord { n: n as u8, x, z }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    pub fn letter(&self, site: usize) -> Letter {
        assert!(site < self.n());
        Letter::from_bits((self.x >> site) & 1 == 1, (self.z >> site) & 1 == 1)
    }

    pub fn set(&mut self, site: usize, letter: Letter) {
        assert!(site < self.n(), "site {site} out of range for n = {}", self.n);
        let bit = 1u64 << site;
        let (x, z) = letter.bits();
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n()).map(|j| self.letter(j)).collect()
    }

    /// Only `Z` (or `I`) letters.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// The same letters on `n + extra` qubits, new sites appended on the right.
    pub fn extend(&self, extra: usize) -> PauliWord {
        PauliWord::from_masks(self.n() + extra, self.x, self.z)
    }

    /// Prepends one site carrying `letter`; existing sites shift right by one.
    pub fn prepend(&self, letter: Letter) -> PauliWord {
        let (x, z) = letter.bits();
        PauliWord::from_masks(self.n() + 1, (self.x << 1) | x as u64, (self.z << 1) | z as u64)
    }

    /// `a(σ) b(σ) = i^φ c(σ)`, returned as `(φ, c)`.
    pub fn multiply(&self, other: &PauliWord) -> Result<(Phase, PauliWord)> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n(), found: other.n() });
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliWord) -> (Phase, PauliWord) {
        // P = i^{|x&z|} X^x Z^z and Z^z X^x = (-1)^{|z&x|} X^x Z^z
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = (self.x & self.z).count_ones() as i64 + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        (Phase::new(e), PauliWord { n: self.n, x, z })
    }

    /// True when the two words commute.
    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }
}

fn site_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Ord for PauliWord {
    /// Graded lexicographic: weight first, then letters left to right with `I < X < Y < Z`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.weight().cmp(&other.weight()))
            .then_with(|| {
                for j in 0..self.n() {
                    let o = self.letter(j).cmp(&other.letter(j));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.n()).map(|j| self.letter(j).as_char()).collect();
        f.write_str(&s)
    }
}

impl core::str::FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<PauliWord> {
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::Contract(alloc::format!("invalid Pauli letter {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Contract("empty Pauli word".into()));
        }
        PauliWord::from_letters(&letters)
    }
}


/// All words on `n` qubits with weight at most `max_weight`, graded lexicographic order.
pub fn words_up_to_weight(n: usize, max_weight: usize) -> Vec<PauliWord> {
    let mut out = Vec::new();
    let mut support = Vec::new();
    collect_supports(n, max_weight.min(n), 0, &mut support, &mut out);
    out.sort();
    out
}

fn collect_supports(n: usize, max_weight: usize, start: usize, support: &mut Vec<usize>, out: &mut Vec<PauliWord>) {
    // emit every letter assignment on the current support
    let r = support.len();
    let total = 3usize.pow(r as u32);
    for code in 0..total {
        let mut w = PauliWord::identity(n);
        let mut c = code;
        for &site in support.iter() {
            w.set(site, Letter::NON_IDENTITY[c % 3]);
            c /= 3;
        }
        out.push(w);
    }
    if r == max_weight {
        return;
    }
    for site in start..n {
        support.push(site);
        collect_supports(n, max_weight, site + 1, support, out);
        support.pop();
    }
}

#[cfg(test)]
mod enumeration_tests {
    use super::*;

    #[test]
    fn counts_match_binomial_formula() {
        assert_eq!(words_up_to_weight(2, 1).len(), 7);
        assert_eq!(words_up_to_weight(6, 2).len(), 154);
        assert_eq!(words_up_to_weight(5, 0).len(), 1);
        assert_eq!(words_up_to_weight(3, 3).len(), 64);
        let v = words_up_to_weight(4, 2);
        let mut dedup = v.clone();
        dedup.dedup();
        assert_eq!(v, dedup);
    }
}
