//! Krawtchouk polynomials `K_r^{n,q}(i) = Σ_j (-q)^j (q-1)^{r-j} C(n-j, r-j) C(i, j)`,
//! their weights, smallest roots and the inequalities bounding them.
//!
//! Values are exact integers. The table is filled with the three-term recurrence
//! `(r+1) K_{r+1}(i) = ((q-1)(n-r) + r - q i) K_r(i) - (q-1)(n-r+1) K_{r-1}(i)`
//! and checked against the explicit sum in the tests.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_bigint::{BigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Constant in `h_d = sqrt(2d) - c (2d)^{-1/6} + o(d^{-1/6})` for the largest Hermite root.
/// Reference value only; nothing here computes with it.
pub const HERMITE_ROOT_CONSTANT: f64 = 1.85575;

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

fn pow(base: i64, exp: usize) -> BigInt {
    let mut acc = BigInt::one();
    let b = BigInt::from(base);
    for _ in 0..exp {
        acc *= &b;
    }
    acc
}

fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parameters `(n, q)` with the full exact value table `K_r(i)`, `0 ≤ r, i ≤ n`.
#[derive(Debug, Clone)]
pub struct KrawtchoukContext {
    n: usize,
    q: usize,
    // values[r][i]
    values: Vec<Vec<BigInt>>,
}

impl KrawtchoukContext {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        if q < 2 {
            return Err(Error::Domain(format!("q = {q} must be at least 2")));
        }
        let qi = q as i64;
        let mut values: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        values.push(vec![BigInt::one(); n + 1]);
        if n >= 1 {
            values.push((0..=n).map(|i| BigInt::from((qi - 1) * n as i64 - qi * i as i64)).collect());
        }
        for r in 1..n {
            let mut next = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let a = BigInt::from((qi - 1) * (n - r) as i64 + r as i64 - qi * i as i64);
                let b = BigInt::from((qi - 1) * (n - r + 1) as i64);
                let num = a * &values[r][i] - b * &values[r - 1][i];
                next.push(num / (r + 1));
            }
            values.push(next);
        }
        Ok(KrawtchoukContext { n, q, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    fn check(&self, r: usize, i: usize) -> Result<()> {
        if r > self.n || i > self.n {
            return Err(Error::Domain(format!("(r, i) = ({r}, {i}) outside 0..={}", self.n)));
        }
        Ok(())
    }

    /// Exact `K_r(i)`.
    pub fn value(&self, r: usize, i: usize) -> Result<&BigInt> {
        self.check(r, i)?;
        Ok(&self.values[r][i])
    }

    pub fn value_f64(&self, r: usize, i: usize) -> f64 {
        to_f64(&self.values[r][i])
    }

    /// `K_r(i)` straight from the defining sum.
    pub fn value_by_sum(&self, r: usize, i: usize) -> Result<BigInt> {
        self.check(r, i)?;
        let q = self.q as i64;
        let mut acc = BigInt::zero();
        for j in 0..=r.min(i) {
            acc += pow(-q, j) * pow(q - 1, r - j) * binomial(self.n - j, r - j) * binomial(i, j);
        }
        Ok(acc)
    }

    /// `K̂_r(i) = K_r(i) / K_r(0)`.
    pub fn normalized(&self, r: usize, i: usize) -> f64 {
        to_f64(&self.values[r][i]) / to_f64(&self.values[r][0])
    }

    /// `w_q(i) = q^{-n} (q-1)^i C(n, i)`.
    pub fn weight(&self, i: usize) -> f64 {
        let num = pow(self.q as i64 - 1, i) * binomial(self.n, i);
        to_f64(&num) / to_f64(&pow(self.q as i64, self.n))
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.weight(i)).collect()
    }

    /// `⟨f, g⟩_q = Σ_i f(i) g(i) w_q(i)` for value vectors on `{0, …, n}`.
    pub fn inner_product(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        if f.len() != self.n + 1 || g.len() != self.n + 1 {
            return Err(Error::Contract(format!("value vectors must have length {}", self.n + 1)));
        }
        Ok((0..=self.n).map(|i| f[i] * g[i] * self.weight(i)).sum())
    }

    /// The vector `(K_r(0), …, K_r(n))` as floats.
    pub fn row_f64(&self, r: usize) -> Vec<f64> {
        (0..=self.n).map(|i| self.value_f64(r, i)).collect()
    }

    /// `‖K_r‖_q^2 = (q-1)^r C(n, r)`.
    pub fn norm_squared(&self, r: usize) -> BigInt {
        pow(self.q as i64 - 1, r) * binomial(self.n, r)
    }

    /// Symmetric tridiagonal matrix whose eigenvalues are the roots of `K_d`.
    pub fn jacobi_matrix(&self, d: usize) -> DMatrix<f64> {
        let (n, q) = (self.n as f64, self.q as f64);
        let mut j = DMatrix::zeros(d, d);
        for k in 0..d {
            let kf = k as f64;
            j[(k, k)] = ((n - kf) * (q - 1.0) + kf) / q;
            if k + 1 < d {
                let b = libm::sqrt((kf + 1.0) * (q - 1.0) * (n - kf)) / q;
                j[(k, k + 1)] = b;
                j[(k + 1, k)] = b;
            }
        }
        j
    }

    /// Sign of `K_d(a / 2^s)`, evaluated exactly.
    fn sign_at_dyadic(&self, d: usize, a: &BigInt, s: usize) -> Sign {
        let q = self.q as i64;
        let scale = BigInt::one() << s;
        // falling factorial numerator and d!/j!
        let mut falling = BigInt::one();
        let mut fact_ratio: Vec<BigInt> = vec![BigInt::one(); d + 1];
        for j in (0..d).rev() {
            fact_ratio[j] = &fact_ratio[j + 1] * (j + 1);
        }
        let mut acc = BigInt::zero();
        for j in 0..=d {
            if j > 0 {
                falling *= a - &scale * (j - 1);
            }
            let term = pow(-q, j) * pow(q - 1, d - j) * binomial(self.n - j, d - j) * &falling * &fact_ratio[j];
            acc += term << (s * (d - j));
        }
        acc.sign()
    }

    /// Smallest real root `ξ_d` of `K_d`: Jacobi eigenvalue, then bisection on the exact sum.
    pub fn smallest_root(&self, d: usize) -> Result<f64> {
        if d == 0 || d > self.n {
            return Err(Error::Domain(format!("root degree d = {d} outside 1..={}", self.n)));
        }
        let guess = crate::linalg::real_eigvalsh(&self.jacobi_matrix(d))[0];
        self.polish_root(d, guess)
    }

    /// Jacobi-matrix estimate without refinement.
    pub fn smallest_root_jacobi(&self, d: usize) -> Result<f64> {
        if d == 0 || d > self.n {
            return Err(Error::Domain(format!("root degree d = {d} outside 1..={}", self.n)));
        }
        Ok(crate::linalg::real_eigvalsh(&self.jacobi_matrix(d))[0])
    }

    fn polish_root(&self, d: usize, guess: f64) -> Result<f64> {
        const BITS: usize = 48;
        let to_dyadic = |x: f64| BigInt::from(libm::round(x * (1u64 << BITS) as f64) as i128);
        // K_d(0) > 0, so the smallest root is the first sign change to the right of 0
        let mut delta = 1e-7 * guess.abs().max(1.0);
        let (mut lo, mut hi);
        loop {
            lo = to_dyadic((guess - delta).max(0.0));
            hi = to_dyadic(guess + delta);
            let slo = self.sign_at_dyadic(d, &lo, BITS);
            let shi = self.sign_at_dyadic(d, &hi, BITS);
            if slo == Sign::NoSign {
                return Ok(to_f64(&lo) / (1u64 << BITS) as f64);
            }
            if shi == Sign::NoSign {
                return Ok(to_f64(&hi) / (1u64 << BITS) as f64);
            }
            if slo == Sign::Plus && shi == Sign::Minus {
                break;
            }
            delta *= 8.0;
            if delta > 0.45 {
                return Err(Error::Solver(format!("could not bracket the smallest root of K_{d}")));
            }
        }
        let one = BigInt::one();
        while &hi - &lo > one {
            let mid: BigInt = (&lo + &hi) >> 1;
            match self.sign_at_dyadic(d, &mid, BITS) {
                Sign::Plus => lo = mid,
                Sign::Minus => hi = mid,
                Sign::NoSign => return Ok(to_f64(&mid) / (1u64 << BITS) as f64),
            }
        }
        Ok(to_f64(&(lo + hi)) / (2.0 * (1u64 << BITS) as f64))
    }

    /// `ξ_{d+1}`, with the convention `ξ_{n+1} = 0` once the level reaches `n`.
    pub fn next_root(&self, d: usize) -> Result<f64> {
        if d >= self.n {
            Ok(0.0)
        } else {
            self.smallest_root(d + 1)
        }
    }

    /// Upper bound on `ξ_d / n` in terms of the largest Hermite root `h_d`.
    pub fn root_upper_bound(&self, d: usize) -> Result<f64> {
        if d == 0 || d + 2 > self.n {
            return Err(Error::Domain(format!("root bound needs 1 ≤ d and d + 2 ≤ n (d = {d}, n = {})", self.n)));
        }
        let (n, q) = (self.n as f64, self.q as f64);
        let h = hermite_largest_root(d);
        Ok((q - 1.0) / q
            - (q - 2.0) / (2.0 * q) * h * h / n
            - libm::sqrt(2.0 * (q - 1.0) * (1.0 - (d as f64 + 2.0) / n)) * h / (q * libm::sqrt(n)))
    }

    /// `K_r(0) - K_r(i)`, nonnegative by the first lemma.
    pub fn lemma1_gap(&self, r: usize, i: usize) -> Result<BigInt> {
        self.check(r, i)?;
        Ok(&self.values[r][0] - &self.values[r][i])
    }

    /// `q (q-1)^{r-1} C(n-1, r-1) i - (K_r(0) - K_r(i))`, nonnegative by the second lemma.
    pub fn lemma2_slack(&self, r: usize, i: usize) -> Result<BigInt> {
        if r == 0 {
            return Err(Error::Domain("lemma 2 needs r ≥ 1".into()));
        }
        let gap = self.lemma1_gap(r, i)?;
        let q = self.q as i64;
        Ok(BigInt::from(q) * pow(q - 1, r - 1) * binomial(self.n - 1, r - 1) * i - gap)
    }

    /// Exact check of `1 - K̂_r(i) ≤ q r i / ((q-1) n)`, cleared of denominators.
    pub fn lemma2_normalized_holds(&self, r: usize, i: usize) -> Result<bool> {
        let gap = self.lemma1_gap(r, i)?;
        let q = self.q as i64;
        let lhs = gap * ((q - 1) * self.n as i64);
        let rhs = BigInt::from(q * r as i64 * i as i64) * &self.values[r][0];
        Ok(lhs <= rhs)
    }

    /// Every `(r, i)` at which one of the two lemmas, or the normalized form of the second,
    /// fails. Empty when all hold.
    pub fn lemma_violations(&self) -> Vec<LemmaViolation> {
        let mut out = Vec::new();
        for r in 0..=self.n {
            for i in 0..=self.n {
                if self.lemma1_gap(r, i).map_or(true, |g| g.sign() == Sign::Minus) {
                    out.push(LemmaViolation { lemma: 1, r, i });
                }
                if r >= 1 {
                    if self.lemma2_slack(r, i).map_or(true, |g| g.sign() == Sign::Minus) {
                        out.push(LemmaViolation { lemma: 2, r, i });
                    }
                    if !self.lemma2_normalized_holds(r, i).unwrap_or(false) {
                        out.push(LemmaViolation { lemma: 2, r, i });
                    }
                }
            }
        }
        out
    }

    /// Entries of the cached table that disagree with the explicit sum.
    pub fn table_defects(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..=self.n {
            for i in 0..=self.n {
                if self.value_by_sum(r, i).ok().as_ref() != Some(&self.values[r][i]) {
                    out.push((r, i));
                }
            }
        }
        out
    }

    /// Overwrites one cached value. Exists so that verification tooling can prove it notices
    /// a damaged table; never needed for computation.
    #[doc(hidden)]
    pub fn corrupt_value(&mut self, r: usize, i: usize, delta: i64) {
        self.values[r][i] += delta;
    }

    /// Coefficients of `(1 - z)^i (1 + (q-1) z)^{n-i}` by convolution.
    pub fn generating_coeffs(&self, i: usize) -> Result<Vec<BigInt>> {
        if i > self.n {
            return Err(Error::Domain(format!("i = {i} > n = {}", self.n)));
        }
        let q = self.q as i64;
        let left: Vec<BigInt> = (0..=i).map(|m| pow(-1, m) * binomial(i, m)).collect();
        let right: Vec<BigInt> = (0..=self.n - i).map(|m| pow(q - 1, m) * binomial(self.n - i, m)).collect();
        let mut out = vec![BigInt::zero(); self.n + 1];
        for (a, x) in left.iter().enumerate() {
            for (b, y) in right.iter().enumerate() {
                out[a + b] += x * y;
            }
        }
        Ok(out)
    }

    pub fn generating_coeff(&self, i: usize, r: usize) -> Result<BigInt> {
        self.check(r, i)?;
        Ok(self.generating_coeffs(i)?.swap_remove(r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaViolation {
    pub lemma: u8,
    pub r: usize,
    pub i: usize,
}

/// `φ_q(t) = (q-1)/q - ((q-2)/q · t + (2/q) sqrt((q-1) t (1-t)))`.
pub fn phi_asymptotic(q: usize, t: f64) -> Result<f64> {
    let qf = q as f64;
    let tmax = (qf - 1.0) / qf;
    if !(0.0..=tmax + 1e-15).contains(&t) || q < 2 {
        return Err(Error::Domain(format!("t = {t} outside [0, {tmax}]")));
    }
    let t = t.min(tmax);
    Ok(tmax - ((qf - 2.0) / qf * t + 2.0 / qf * libm::sqrt((qf - 1.0) * t * (1.0 - t))))
}

/// Largest root of the physicists' Hermite polynomial `H_d`.
pub fn hermite_largest_root(d: usize) -> f64 {
    if d <= 1 {
        return 0.0;
    }
    let mut j = DMatrix::zeros(d, d);
    for k in 1..d {
        let b = libm::sqrt(k as f64 / 2.0);
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    *crate::linalg::real_eigvalsh(&j).last().unwrap()
}
