//! Exhaustive exact-rational ground truth for tiny Bernoulli ensembles.
//!
//! Every `m x n` matrix is visited in the order of the `mn`-bit counter
//! (see [`BitMatrix::from_counter`]). Matrices are grouped by their weight,
//! because the probability `p^wt (1 - p)^(mn - wt)` depends on nothing else;
//! integer sums of `A_w(H)` and `A_w1(H) A_w2(H)` per weight class are
//! combined with the class probabilities in exact arithmetic at the end.
//! The integer sums do not depend on `k`, so one enumeration serves every
//! `k`, and disjoint counter ranges can be accumulated independently and
//! merged.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::channel::Bsc;
use crate::ensemble::{self, BernoulliEnsemble};
use crate::error::{Error, Result};
use crate::exact::{self, binomial, rational_from_int, Rational, RationalPoly};
use crate::gf2::{self, BitMatrix, BitVector};
use crate::math::relative_difference;

/// Largest number of matrix entries `mn` enumerated by default.
pub const DEFAULT_MAX_ENTRIES: u32 = 24;

/// Largest code length for [`brute_force_joint_pass`].
pub const JOINT_PASS_MAX_N: u32 = 20;

/// Relative tolerance between the log-domain formulas and the oracle.
pub const RELATIVE_TOLERANCE: f64 = 1e-10;

/// Crossover probabilities at which polynomial quantities are compared
/// numerically.
pub const CHECK_EPS: [f64; 4] = [0.01, 0.1, 0.3, 0.49];

fn check_guard(m: u32, n: u32, max_entries: u32) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix { rows: m as usize, cols: n as usize });
    }
    let entries = m as usize * n as usize;
    if entries > max_entries.min(63) as usize {
        return Err(Error::GuardExceeded { dimension: entries, limit: max_entries.min(63) });
    }
    Ok(())
}

fn check_k(n: u32, k: &Rational) -> Result<()> {
    let half = Rational::new(BigInt::from(n), BigInt::from(2));
    if !k.is_positive() || *k > half {
        return Err(Error::InvalidRowWeight { k: exact::to_f64(k), n });
    }
    Ok(())
}

fn entry_probability(n: u32, k: &Rational) -> Rational {
    k / rational_from_int(n)
}

/// `p^wt (1 - p)^(mn - wt)` for each matrix weight `wt` in `0..=mn`.
fn class_probabilities(m: u32, n: u32, k: &Rational) -> Vec<Rational> {
    let p = entry_probability(n, k);
    let q = Rational::one() - &p;
    let total = (m * n) as usize;
    (0..=total).map(|wt| num_traits::pow(p.clone(), wt) * num_traits::pow(q.clone(), total - wt)).collect()
}

/// Exact probability of a single matrix under `B(m, n, k)`.
pub fn matrix_probability(h: &BitMatrix, k: &Rational) -> Result<Rational> {
    check_k(h.cols() as u32, k)?;
    let probs = class_probabilities(h.rows() as u32, h.cols() as u32, k);
    Ok(probs[h.weight()].clone())
}

/// Every matrix of `B(m, n, k)` with its probability, in counter order.
pub fn enumerate_matrices(m: u32, n: u32, k: &Rational, max_entries: u32) -> Result<Vec<(BitMatrix, Rational)>> {
    check_guard(m, n, max_entries)?;
    check_k(n, k)?;
    let probs = class_probabilities(m, n, k);
    (0..1u64 << (m * n))
        .map(|c| {
            let h = BitMatrix::from_counter(m as usize, n as usize, c)?;
            let p = probs[h.weight()].clone();
            Ok((h, p))
        })
        .collect()
}

/// Integer sums over the matrices of each weight class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSums {
    m: u32,
    n: u32,
    /// number of matrices visited, per class
    count: Vec<u64>,
    /// `sum A_w(H)`, indexed `[wt][w]`
    a: Vec<u64>,
    /// `sum A_w1(H) A_w2(H)`, indexed `[wt][w1][w2]`
    aa: Vec<u128>,
}

impl ClassSums {
    pub fn new(m: u32, n: u32, max_entries: u32) -> Result<Self> {
        check_guard(m, n, max_entries)?;
        let classes = (m * n + 1) as usize;
        let w = (n + 1) as usize;
        Ok(ClassSums {
            m,
            n,
            count: alloc::vec![0; classes],
            a: alloc::vec![0; classes * w],
            aa: alloc::vec![0; classes * w * w],
        })
    }

    /// Number of matrices, `2^(mn)`.
    pub fn matrix_count(&self) -> u64 {
        1u64 << (self.m * self.n)
    }

    /// Visits the matrices whose counters fall in `range`.
    pub fn accumulate(&mut self, range: Range<u64>) -> Result<()> {
        assert!(range.end <= self.matrix_count());
        let w = (self.n + 1) as usize;
        for c in range {
            let h = BitMatrix::from_counter(self.m as usize, self.n as usize, c)?;
            let wt = h.weight();
            let dist = gf2::weight_distribution(&h)?;
            let counts = dist.counts();
            self.count[wt] += 1;
            let a = &mut self.a[wt * w..(wt + 1) * w];
            for (slot, &x) in a.iter_mut().zip(counts) {
                *slot += x;
            }
            let aa = &mut self.aa[wt * w * w..(wt + 1) * w * w];
            for (i, &x) in counts.iter().enumerate().filter(|(_, &x)| x != 0) {
                for (j, &y) in counts.iter().enumerate() {
                    aa[i * w + j] += u128::from(x) * u128::from(y);
                }
            }
        }
        Ok(())
    }

    /// Adds the sums of a disjoint counter range.
    pub fn merge(&mut self, other: &ClassSums) {
        assert_eq!((self.m, self.n), (other.m, other.n));
        for (a, b) in self.count.iter_mut().zip(&other.count) {
            *a += b;
        }
        for (a, b) in self.a.iter_mut().zip(&other.a) {
            *a += b;
        }
        for (a, b) in self.aa.iter_mut().zip(&other.aa) {
            *a += b;
        }
    }

    pub fn is_complete(&self) -> bool {
        self.count.iter().sum::<u64>() == self.matrix_count()
    }

    /// Exact moments for one `k`. All matrices must have been visited.
    pub fn moments(&self, k: &Rational) -> Result<EnsembleMoments> {
        if !self.is_complete() {
            return Err(Error::InvalidConfig("class sums do not cover every matrix"));
        }
        check_k(self.n, k)?;
        let (m, n) = (self.m, self.n);
        let w = (n + 1) as usize;
        let probs = class_probabilities(m, n, k);
        let probs_int: Vec<Rational> = self.count.iter().map(|&c| rational_from_int(c)).collect();
        let total_probability: Rational =
            probs.iter().zip(&probs_int).map(|(p, c)| p * c).fold(Rational::zero(), |acc, x| acc + x);

        let weighted = |f: &dyn Fn(usize) -> BigInt| -> Rational {
            probs.iter().enumerate().fold(Rational::zero(), |acc, (wt, p)| acc + p * Rational::from_integer(f(wt)))
        };
        let e_aw: Vec<Rational> = (0..w).map(|i| weighted(&|wt| BigInt::from(self.a[wt * w + i]))).collect();
        let mut e_awaw = alloc::vec![alloc::vec![Rational::zero(); w]; w];
        for i in 0..w {
            for j in i..w {
                let v = weighted(&|wt| BigInt::from(self.aa[(wt * w + i) * w + j]));
                e_awaw[j][i] = v.clone();
                e_awaw[i][j] = v;
            }
        }
        Ok(EnsembleMoments::assemble(m, n, k.clone(), probs, total_probability, e_aw, e_awaw))
    }
}

/// Exact moments of the weight distribution and of `P_U`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMoments {
    pub m: u32,
    pub n: u32,
    pub k: Rational,
    /// probability of any single matrix of weight `wt`, indexed by `wt`
    pub class_probability: Vec<Rational>,
    /// `sum_H P(H)`; equals 1
    pub total_probability: Rational,
    pub e_aw: Vec<Rational>,
    pub e_awaw: Vec<Vec<Rational>>,
    pub cov: Vec<Vec<Rational>>,
    pub e_pu: RationalPoly,
    pub e_pu2: RationalPoly,
    pub var_pu: RationalPoly,
}

impl EnsembleMoments {
    fn assemble(
        m: u32,
        n: u32,
        k: Rational,
        class_probability: Vec<Rational>,
        total_probability: Rational,
        e_aw: Vec<Rational>,
        e_awaw: Vec<Vec<Rational>>,
    ) -> Self {
        let w = e_aw.len();
        let cov: Vec<Vec<Rational>> =
            (0..w).map(|i| (0..w).map(|j| &e_awaw[i][j] - &e_aw[i] * &e_aw[j]).collect()).collect();
        let nu = n as usize;
        // P_U(H) = sum_{w>=1} A_w(H) eps^w (1-eps)^(n-w), so by linearity
        // E[P_U] and E[P_U^2] only need E[A_w] and E[A_w1 A_w2].
        let e_pu = (1..w).fold(RationalPoly::zero(), |acc, i| &acc + &RationalPoly::pattern(nu, i).scale(&e_aw[i]));
        let mut by_sum = alloc::vec![Rational::zero(); 2 * nu + 1];
        for i in 1..w {
            for j in 1..w {
                by_sum[i + j] += &e_awaw[i][j];
            }
        }
        let e_pu2 = by_sum
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(RationalPoly::zero(), |acc, (s, c)| &acc + &RationalPoly::pattern(2 * nu, s).scale(c));
        let var_pu = &e_pu2 - &(&e_pu * &e_pu);
        EnsembleMoments { m, n, k, class_probability, total_probability, e_aw, e_awaw, cov, e_pu, e_pu2, var_pu }
    }
}

/// Visits all `2^(mn)` matrices in a single pass.
pub fn enumerate_class_sums(m: u32, n: u32, max_entries: u32) -> Result<ClassSums> {
    let mut sums = ClassSums::new(m, n, max_entries)?;
    let total = sums.matrix_count();
    sums.accumulate(0..total)?;
    Ok(sums)
}

/// Exact moments of `B(m, n, k)` by exhaustive enumeration.
pub fn enumerate_ensemble(m: u32, n: u32, k: &Rational) -> Result<EnsembleMoments> {
    enumerate_ensemble_with(m, n, k, DEFAULT_MAX_ENTRIES)
}

pub fn enumerate_ensemble_with(m: u32, n: u32, k: &Rational, max_entries: u32) -> Result<EnsembleMoments> {
    check_k(n, k)?;
    enumerate_class_sums(m, n, max_entries)?.moments(k)
}

/// `Pr[h x^T = 0, h y^T = 0]^m` by summing over all `2^n` rows `h`.
pub fn brute_force_joint_pass(m: u32, n: u32, k: &Rational, x: &BitVector, y: &BitVector) -> Result<Rational> {
    if n == 0 {
        return Err(Error::EmptyMatrix { rows: m as usize, cols: 0 });
    }
    if n > JOINT_PASS_MAX_N {
        return Err(Error::GuardExceeded { dimension: n as usize, limit: JOINT_PASS_MAX_N });
    }
    for v in [x, y] {
        if v.len() != n as usize {
            return Err(Error::DimensionMismatch { expected: n as usize, actual: v.len() });
        }
    }
    check_k(n, k)?;
    let (xw, yw) = (x.words()[0], y.words()[0]);
    let mut passing = alloc::vec![0u64; n as usize + 1];
    for h in 0..1u64 << n {
        if (h & xw).count_ones() % 2 == 0 && (h & yw).count_ones() % 2 == 0 {
            passing[h.count_ones() as usize] += 1;
        }
    }
    let p = entry_probability(n, k);
    let q = Rational::one() - &p;
    let row = passing.iter().enumerate().fold(Rational::zero(), |acc, (wt, &c)| {
        acc + rational_from_int(c) * num_traits::pow(p.clone(), wt) * num_traits::pow(q.clone(), n as usize - wt)
    });
    Ok(num_traits::pow(row, m as usize))
}

/// Exact moments predicted by the closed forms, for rational `k`.
pub fn analytic_moments(m: u32, n: u32, k: &Rational) -> Result<EnsembleMoments> {
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix { rows: m as usize, cols: n as usize });
    }
    check_k(n, k)?;
    let w = (n + 1) as usize;
    let e_aw: Vec<Rational> = (0..=n).map(|i| ensemble::avg_weight_exact(m, n, k, i)).collect();
    let mut e_awaw = alloc::vec![alloc::vec![Rational::zero(); w]; w];
    for w1 in 0..=n {
        let c1 = rational_from_int(binomial(n.into(), w1.into()));
        for w2 in w1..=n {
            let (lo, hi) = ensemble::overlap_range(n, w1, w2);
            let mut acc = Rational::zero();
            for v in lo..=hi {
                let count = binomial(w1.into(), v.into()) * binomial((n - w1).into(), (w2 - v).into());
                acc += rational_from_int(count) * ensemble::joint_pass_prob_exact(m, n, k, w1, w2, v)?;
            }
            let v = &c1 * acc;
            e_awaw[w2 as usize][w1 as usize] = v.clone();
            e_awaw[w1 as usize][w2 as usize] = v;
        }
    }
    let probs = class_probabilities(m, n, k);
    Ok(EnsembleMoments::assemble(m, n, k.clone(), probs, Rational::one(), e_aw, e_awaw))
}

/// Exact determinant by fraction-valued Gaussian elimination.
pub fn determinant(mat: &[Vec<Rational>]) -> Rational {
    let n = mat.len();
    let mut a: Vec<Vec<Rational>> = mat.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
        }
    }
    det
}

/// Whether every principal minor is nonnegative, which for a symmetric
/// matrix is equivalent to positive semidefiniteness. Exponential in the
/// dimension.
pub fn principal_minors_nonnegative(mat: &[Vec<Rational>]) -> bool {
    let n = mat.len();
    assert!(n < 20);
    (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<Rational>> = idx.iter().map(|&i| idx.iter().map(|&j| mat[i][j].clone()).collect()).collect();
        !determinant(&sub).is_negative()
    })
}

/// Outcome of one comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    /// the oracle and the closed forms agree, but a published value differs
    Flagged,
    Fail,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ReportEntry {
    pub name: String,
    #[serde(rename = "paper_value", skip_serializing_if = "Option::is_none")]
    pub published: Option<String>,
    pub oracle_value: String,
    pub analytic_value: String,
    /// relative deviation of the log-domain evaluation from the oracle
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_deviation: Option<f64>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct VerificationReport {
    pub m: u32,
    pub n: u32,
    pub k: String,
    pub random_branch: bool,
    pub entries: Vec<ReportEntry>,
    pub max_relative_deviation: f64,
    pub exact_mismatches: usize,
    pub status: Status,
}

impl VerificationReport {
    pub fn entry(&self, name: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.status == Status::Flagged)
    }
}

struct ReportBuilder {
    entries: Vec<ReportEntry>,
}

impl ReportBuilder {
    fn exact(&mut self, name: String, oracle: &Rational, analytic: &Rational, float: Option<f64>) {
        let dev = float.map(|f| relative_difference(exact::to_f64(oracle), f));
        let ok = oracle == analytic && dev.is_none_or(|d| d <= RELATIVE_TOLERANCE);
        self.entries.push(ReportEntry {
            name,
            published: None,
            oracle_value: oracle.to_string(),
            analytic_value: analytic.to_string(),
            relative_deviation: dev,
            status: if ok { Status::Pass } else { Status::Fail },
        });
    }

    fn float(&mut self, name: String, oracle: &Rational, analytic: f64) {
        let dev = relative_difference(exact::to_f64(oracle), analytic);
        self.entries.push(ReportEntry {
            name,
            published: None,
            oracle_value: oracle.to_string(),
            analytic_value: format!("{analytic:e}"),
            relative_deviation: Some(dev),
            status: if dev <= RELATIVE_TOLERANCE { Status::Pass } else { Status::Fail },
        });
    }

    fn polynomial(&mut self, name: &str, oracle: &RationalPoly, analytic: &RationalPoly) {
        self.entries.push(ReportEntry {
            name: name.to_string(),
            published: None,
            oracle_value: oracle.to_string(),
            analytic_value: analytic.to_string(),
            relative_deviation: None,
            status: if oracle == analytic { Status::Pass } else { Status::Fail },
        });
    }

    fn published(&mut self, name: String, printed: Rational, oracle: &Rational, analytic: &Rational) {
        let status = if oracle != analytic {
            Status::Fail
        } else if printed != *oracle {
            Status::Flagged
        } else {
            Status::Pass
        };
        self.entries.push(ReportEntry {
            name,
            published: Some(printed.to_string()),
            oracle_value: oracle.to_string(),
            analytic_value: analytic.to_string(),
            relative_deviation: None,
            status,
        });
    }
}

/// Values printed for the two-column single-row example `B(1, 2, 1/2)`,
/// as `(name, numerator, denominator)`.
const PUBLISHED_EXAMPLE: [(&str, i64, i64); 15] = [
    ("matrix_probability[00]", 9, 16),
    ("matrix_probability[10]", 3, 16),
    ("matrix_probability[01]", 3, 16),
    ("matrix_probability[11]", 1, 16),
    ("cov[1,1]", 3, 8),
    ("cov[1,2]", 3, 16),
    ("cov[2,2]", 15, 64),
    ("e_pu[eps^1]", 2, 3),
    ("e_pu[eps^2]", -7, 8),
    ("e_pu2[eps^2]", 21, 8),
    ("e_pu2[eps^3]", -3, 8),
    ("e_pu2[eps^4]", 1, 1),
    ("var_pu[eps^2]", 3, 8),
    ("var_pu[eps^3]", -3, 8),
    ("var_pu[eps^4]", 15, 64),
];

fn published_lookup(name: &str, oracle: &EnsembleMoments, analytic: &EnsembleMoments) -> Option<(Rational, Rational)> {
    let idx = |s: &str| -> usize { s.parse().unwrap_or(usize::MAX) };
    let inner = name.split_once('[')?.1.strip_suffix(']')?;
    let (family, _) = name.split_once('[')?;
    let pick = |o: Rational, a: Rational| Some((o, a));
    match family {
        "matrix_probability" => {
            let wt = inner.bytes().filter(|&b| b == b'1').count();
            pick(oracle.class_probability[wt].clone(), analytic.class_probability[wt].clone())
        }
        "cov" => {
            let (i, j) = inner.split_once(',')?;
            let (i, j) = (idx(i), idx(j));
            pick(oracle.cov.get(i)?.get(j)?.clone(), analytic.cov.get(i)?.get(j)?.clone())
        }
        _ => {
            let d = idx(inner.strip_prefix("eps^")?);
            let poly = |m: &EnsembleMoments| match family {
                "e_pu" => m.e_pu.coeff(d),
                "e_pu2" => m.e_pu2.coeff(d),
                _ => m.var_pu.coeff(d),
            };
            pick(poly(oracle), poly(analytic))
        }
    }
}

/// Compares the oracle with the exact closed forms and with the log-domain
/// evaluations of [`BernoulliEnsemble`]. Mismatches are recorded in the
/// report rather than returned as errors.
pub fn verify_closed_forms(m: u32, n: u32, k: &Rational) -> Result<VerificationReport> {
    verify_with_sums(&enumerate_class_sums(m, n, DEFAULT_MAX_ENTRIES)?, k)
}

/// As [`verify_closed_forms`], reusing class sums gathered elsewhere.
pub fn verify_with_sums(sums: &ClassSums, k: &Rational) -> Result<VerificationReport> {
    let (m, n) = (sums.m, sums.n);
    let oracle = sums.moments(k)?;
    let analytic = analytic_moments(m, n, k)?;
    let ens = BernoulliEnsemble::new(m, n, exact::to_f64(k))?;
    let mut b = ReportBuilder { entries: Vec::new() };

    b.exact("total_probability".to_string(), &oracle.total_probability, &Rational::one(), None);
    for w in 0..=n {
        let f = ens.avg_weight(w)?.to_f64();
        b.exact(format!("e_aw[{w}]"), &oracle.e_aw[w as usize], &analytic.e_aw[w as usize], Some(f));
    }
    for w1 in 0..=n {
        for w2 in w1..=n {
            let (i, j) = (w1 as usize, w2 as usize);
            let f = ens.second_moment_weight(w1, w2)?.to_f64();
            b.exact(format!("e_awaw[{w1},{w2}]"), &oracle.e_awaw[i][j], &analytic.e_awaw[i][j], Some(f));
            let f = ens.cov_weight(w1, w2)?.to_f64();
            b.exact(format!("cov[{w1},{w2}]"), &oracle.cov[i][j], &analytic.cov[i][j], Some(f));
        }
    }
    b.polynomial("e_pu", &oracle.e_pu, &analytic.e_pu);
    b.polynomial("e_pu2", &oracle.e_pu2, &analytic.e_pu2);
    b.polynomial("var_pu", &oracle.var_pu, &analytic.var_pu);
    for eps in CHECK_EPS {
        let ch = Bsc::new(eps)?;
        let e = exact::from_f64(eps);
        b.float(format!("e_pu(eps={eps})"), &oracle.e_pu.eval(&e), ens.avg_pu(&ch).to_f64());
        b.float(format!("var_pu(eps={eps})"), &oracle.var_pu.eval(&e), ens.var_pu(&ch).to_f64());
        if ens.is_random() {
            let lemma = ensemble::avg_pu_random_closed_form(m, n, &ch).to_f64();
            b.float(format!("e_pu_closed_form(eps={eps})"), &oracle.e_pu.eval(&e), lemma);
            let closed = ensemble::var_pu_random_closed_form(m, n, &ch).to_f64();
            b.float(format!("var_pu_closed_form(eps={eps})"), &oracle.var_pu.eval(&e), closed);
        }
    }
    if ens.is_random() {
        // off-diagonal covariances vanish exactly for the uniform ensemble
        let nonzero = (0..=n as usize)
            .flat_map(|i| (0..=n as usize).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && !oracle.cov[i][j].is_zero())
            .count();
        let zero = Rational::zero();
        let count = rational_from_int(nonzero as u64);
        b.exact("cov_offdiagonal_nonzero_count".to_string(), &count, &zero, None);
    }
    if (m, n) == (1, 2) && *k == exact::rational(1, 2) {
        for (name, num, den) in PUBLISHED_EXAMPLE {
            if let Some((o, a)) = published_lookup(name, &oracle, &analytic) {
                b.published(name.to_string(), exact::rational(num, den), &o, &a);
            }
        }
    }

    let entries = b.entries;
    let max_relative_deviation =
        entries.iter().filter_map(|e| e.relative_deviation).fold(0.0, f64::max);
    let exact_mismatches = entries.iter().filter(|e| e.status == Status::Fail).count();
    let status = if exact_mismatches == 0 { Status::Pass } else { Status::Fail };
    Ok(VerificationReport {
        m,
        n,
        k: k.to_string(),
        random_branch: ens.is_random(),
        entries,
        max_relative_deviation,
        exact_mismatches,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    fn half() -> Rational {
        rational(1, 2)
    }

    #[test]
    fn table_one_probabilities() {
        let all = enumerate_matrices(1, 2, &half(), DEFAULT_MAX_ENTRIES).unwrap();
        let probs: Vec<Rational> = all.iter().map(|(_, p)| p.clone()).collect();
        assert_eq!(probs, [rational(9, 16), rational(3, 16), rational(3, 16), rational(1, 16)]);
        let rows: Vec<String> = all.iter().map(|(h, _)| gf2::to_row_strings(h).concat()).collect();
        assert_eq!(rows, ["00", "10", "01", "11"]);
    }

    #[test]
    fn table_one_moments() {
        let mom = enumerate_ensemble(1, 2, &half()).unwrap();
        assert_eq!(mom.total_probability, Rational::one());
        assert_eq!(mom.e_aw, [rational(1, 1), rational(3, 2), rational(5, 8)]);
        assert_eq!(mom.e_awaw[1][1], rational(21, 8));
        assert_eq!(mom.e_awaw[1][2], rational(9, 8));
        assert_eq!(mom.cov[1][1], rational(3, 8));
        assert_eq!(mom.cov[1][2], rational(3, 16));
        assert_eq!(mom.cov[2][1], rational(3, 16));
        assert_eq!(mom.cov[2][2], rational(15, 64));
        assert_eq!(mom.e_pu.to_string(), "3/2*eps - 7/8*eps^2");
        assert_eq!(mom.e_pu2.to_string(), "21/8*eps^2 - 3*eps^3 + eps^4");
        assert_eq!(mom.var_pu.to_string(), "3/8*eps^2 - 3/8*eps^3 + 15/64*eps^4");
    }

    #[test]
    fn pu_squared_matches_per_matrix_sum() {
        // independent path: square each matrix's own polynomial
        for (m, n, k) in [(1, 2, half()), (2, 3, rational(3, 4)), (2, 2, rational(1, 1))] {
            let mut direct = RationalPoly::zero();
            for (h, p) in enumerate_matrices(m, n, &k, DEFAULT_MAX_ENTRIES).unwrap() {
                let pu = gf2::pu_polynomial(&h).unwrap();
                direct = &direct + &(&pu * &pu).scale(&p);
            }
            assert_eq!(enumerate_ensemble(m, n, &k).unwrap().e_pu2, direct);
        }
    }

    #[test]
    fn verification_report_example() {
        let r = verify_closed_forms(1, 2, &half()).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.entry("cov[1,1]").unwrap().oracle_value, "3/8");
        let flagged: Vec<&str> = r.flagged().map(|e| e.name.as_str()).collect();
        assert_eq!(flagged, ["e_pu[eps^1]", "e_pu2[eps^3]"]);
        let e = r.entry("e_pu2[eps^3]").unwrap();
        assert_eq!(e.published.as_deref(), Some("-3/8"));
        assert_eq!(e.oracle_value, "-3");
    }

    #[test]
    fn verification_small_cases() {
        for (m, n, k) in [(2, 2, rational(1, 1)), (2, 3, rational(3, 4)), (3, 4, rational(2, 1))] {
            let r = verify_closed_forms(m, n, &k).unwrap();
            assert_eq!(r.status, Status::Pass, "{m} {n} {k}");
            assert!(r.max_relative_deviation <= RELATIVE_TOLERANCE);
        }
        let r = verify_closed_forms(3, 4, &rational(2, 1)).unwrap();
        assert!(r.random_branch);
        assert_eq!(r.entry("cov_offdiagonal_nonzero_count").unwrap().status, Status::Pass);
    }

    #[test]
    fn partitioned_sums_are_identical() {
        let whole = enumerate_class_sums(2, 4, DEFAULT_MAX_ENTRIES).unwrap();
        let mut parts = ClassSums::new(2, 4, DEFAULT_MAX_ENTRIES).unwrap();
        for r in [0..37, 37..200, 200..256] {
            let mut part = ClassSums::new(2, 4, DEFAULT_MAX_ENTRIES).unwrap();
            part.accumulate(r).unwrap();
            parts.merge(&part);
        }
        assert_eq!(whole, parts);
    }

    #[test]
    fn guards_and_domain() {
        assert!(matches!(enumerate_ensemble(5, 5, &half()), Err(Error::GuardExceeded { .. })));
        assert!(enumerate_ensemble(1, 2, &rational(3, 2)).is_err());
        assert!(enumerate_ensemble(1, 2, &rational(0, 1)).is_err());
        let mut partial = ClassSums::new(1, 2, DEFAULT_MAX_ENTRIES).unwrap();
        partial.accumulate(0..2).unwrap();
        assert!(partial.moments(&half()).is_err());
    }

    #[test]
    fn joint_pass_examples() {
        let x = BitVector::parse("10").unwrap();
        let y = BitVector::parse("11").unwrap();
        assert_eq!(brute_force_joint_pass(1, 2, &half(), &x, &y).unwrap(), rational(9, 16));
        assert!(brute_force_joint_pass(1, 21, &half(), &BitVector::zeros(21), &BitVector::zeros(21)).is_err());
    }

    #[test]
    fn determinant_values() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<Rational>> {
            rows.iter().map(|r| r.iter().map(|&x| rational(x, 1)).collect()).collect()
        };
        assert_eq!(determinant(&m(&[&[2, 1], &[1, 2]])), rational(3, 1));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), rational(-1, 1));
        assert!(principal_minors_nonnegative(&m(&[&[1, 1], &[1, 1]])));
        assert!(!principal_minors_nonnegative(&m(&[&[0, 1], &[1, 0]])));
    }
}
