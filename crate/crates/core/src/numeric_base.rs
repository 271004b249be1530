//! Rank certification across precision levels and the SVD partition into
//! base parameters `φ_b = φ1 + β·φ2`.

use serde_json::json;

use crate::linalg::{condition_inf, Lu, Matrix};
use crate::model::param_label;
use crate::precision::{PScalar, PrecisionLevel};
use crate::svd::{svd, SvdResult};
use crate::Error;

/// Largest relative drift of retained singular values between the top two levels.
pub const DRIFT_TOL: f64 = 1e-6;
/// Minimum shrink of discarded singular values between consecutive levels.
pub const SHRINK_FACTOR: f64 = 1e3;

/// Singular values at one ladder level.
#[derive(Clone, Debug)]
pub struct LevelSpectrum {
    pub level: PrecisionLevel,
    pub sigma: Vec<PScalar>,
}

#[derive(Clone, Debug)]
pub struct RidgeReport {
    pub levels: Vec<LevelSpectrum>,
    /// Certified rank, `None` when no rank passes the stability test.
    pub rank: Option<usize>,
    /// Max relative drift of σ1..σr between the top two levels.
    pub drift: f64,
    /// σ_k(lower)/σ_k(upper) for k > r, per consecutive level pair.
    pub shrink: Vec<Vec<f64>>,
}

fn noise_floor(sigma: &[PScalar], level: PrecisionLevel) -> f64 {
    let s1 = sigma.first().map_or(0.0, PScalar::to_f64);
    s1 * 10f64.powi(8 - level.digits() as i32)
}

fn rel_drift(a: &PScalar, b: &PScalar) -> f64 {
    let a = a.convert(b.level());
    let d = (a - b).abs().to_f64();
    let m = b.abs().to_f64();
    if m == 0.0 {
        if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        d / m
    }
}

fn shrink_ratio(lower: &PScalar, upper: &PScalar) -> f64 {
    let (l, u) = (lower.to_f64().abs(), upper.to_f64().abs());
    if u == 0.0 {
        if l == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        l / u
    }
}

/// Applies the ridge stability test to spectra ordered by increasing precision.
pub fn certify_spectra(levels: Vec<LevelSpectrum>) -> Result<RidgeReport, Error> {
    if levels.len() < 2 {
        return Err(Error::Precision("a rank certification ladder needs at least two levels".into()));
    }
    if levels.windows(2).any(|w| w[0].level.digits() >= w[1].level.digits()) {
        return Err(Error::Precision("ladder levels must increase".into()));
    }
    let n = levels[0].sigma.len();
    if levels.iter().any(|l| l.sigma.len() != n) {
        return Err(Error::Precision("spectra of different lengths".into()));
    }
    let top = &levels[levels.len() - 1];
    let below = &levels[levels.len() - 2];
    let drifts: Vec<f64> = (0..n).map(|k| rel_drift(&below.sigma[k], &top.sigma[k])).collect();
    let top_floor = noise_floor(&top.sigma, top.level);

    let tail_ok = |r: usize| {
        levels.windows(2).all(|w| {
            let floor = noise_floor(&w[1].sigma, w[1].level);
            (r..n).all(|k| {
                w[1].sigma[k].to_f64().abs() <= floor || shrink_ratio(&w[0].sigma[k], &w[1].sigma[k]) >= SHRINK_FACTOR
            })
        })
    };
    let head_ok = |r: usize| {
        (0..r).all(|k| drifts[k] <= DRIFT_TOL && top.sigma[k].to_f64() > top_floor)
    };
    let rank = (0..=n).rev().find(|&r| head_ok(r) && tail_ok(r));
    let r = rank.unwrap_or(0);
    let drift = drifts[..r].iter().cloned().fold(0.0, f64::max);
    let shrink = levels
        .windows(2)
        .map(|w| (r..n).map(|k| shrink_ratio(&w[0].sigma[k], &w[1].sigma[k])).collect())
        .collect();
    Ok(RidgeReport {
        levels,
        rank,
        drift,
        shrink,
    })
}

/// Rebuilds W at every ladder level and certifies its rank. The SVD at the
/// top level is returned alongside for reuse.
pub fn certify_rank(
    builder: impl Fn(PrecisionLevel) -> Result<Matrix, Error>,
    ladder: &[PrecisionLevel],
) -> Result<(RidgeReport, Vec<SvdResult>), Error> {
    let mut svds = Vec::new();
    for &level in ladder {
        let w = builder(level)?;
        svds.push(svd(&w, level)?);
    }
    let levels = svds
        .iter()
        .map(|s| LevelSpectrum {
            level: s.level,
            sigma: s.sigma.clone(),
        })
        .collect();
    Ok((certify_spectra(levels)?, svds))
}

impl RidgeReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "levels": self.levels.iter().map(|l| json!({
                "digits": l.level.to_string(),
                "sigma": l.sigma.iter().map(PScalar::to_decimal_string).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "certified": self.rank.is_some(),
            "rank": self.rank,
            "drift": self.drift,
            "shrink": self.shrink,
            "drift_tolerance": DRIFT_TOL,
            "shrink_factor": SHRINK_FACTOR,
        })
    }
}

/// Naive tolerance-cut rank and successive gap ratios of a double precision spectrum.
#[derive(Clone, Debug)]
pub struct DpDiagnostic {
    pub rank: usize,
    pub sigma: Vec<f64>,
    /// `gaps[k] = σ_{k+1}/σ_{k+2}` (zero-based: gap after the (k+1)-th value).
    pub gaps: Vec<f64>,
}

impl DpDiagnostic {
    pub fn from_sigma(sigma: Vec<f64>, tol: f64) -> Self {
        let s1 = sigma.first().copied().unwrap_or(0.0);
        let rank = sigma.iter().filter(|&&s| s > tol * s1).count();
        let gaps = sigma
            .windows(2)
            .map(|w| if w[1] == 0.0 { f64::INFINITY } else { w[0] / w[1] })
            .collect();
        DpDiagnostic { rank, sigma, gaps }
    }

    /// Gap σ_k/σ_{k+1} after the k-th singular value (1-based).
    pub fn gap_after(&self, k: usize) -> f64 {
        self.gaps[k - 1]
    }
}

/// Double precision SVD of `w` with a relative tolerance cut.
pub fn dp_rank_diagnostic(w: &Matrix, tol: f64) -> Result<DpDiagnostic, Error> {
    let w = w.convert(PrecisionLevel::DoubleNative);
    let s = svd(&w, PrecisionLevel::DoubleNative)?;
    Ok(DpDiagnostic::from_sigma(s.sigma_f64(), tol))
}

/// Split of the parameter indices into kept (φ1) and eliminated (φ2), both ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub kept: Vec<usize>,
    pub eliminated: Vec<usize>,
}

impl Partition {
    /// The permutation Π as kept indices followed by eliminated ones.
    pub fn permutation(&self) -> Vec<usize> {
        self.kept.iter().chain(&self.eliminated).copied().collect()
    }
}

fn v22_condition(v2: &Matrix, eliminated: &[usize]) -> Option<PScalar> {
    condition_inf(&v2.select_rows(eliminated))
}

/// Chooses φ2 so that the rows of V2 it selects form a nonsingular square block.
pub fn choose_partition(v2: &Matrix, level: PrecisionLevel, pinned: Option<&[usize]>) -> Result<Partition, Error> {
    let (n, d) = (v2.rows(), v2.cols());
    let limit = 10f64.powf(level.digits() as f64 / 2.0);
    let eliminated: Vec<usize> = match pinned {
        Some(pins) => {
            let mut p = pins.to_vec();
            p.sort_unstable();
            p.dedup();
            if p.len() != pins.len() || p.iter().any(|&i| i >= n) {
                return Err(Error::PinnedSingular("pin set has repeated or out-of-range indices".into()));
            }
            if p.len() != d {
                return Err(Error::PinnedSingular(format!(
                    "pin set has {} parameters but the nullspace has dimension {d}",
                    p.len()
                )));
            }
            p
        }
        None => {
            let tol = PScalar::from_f64(10f64.powf(-(level.digits() as f64) / 4.0), level);
            let mut basis: Vec<Vec<PScalar>> = Vec::new();
            let mut chosen = Vec::new();
            for i in (0..n).rev() {
                if chosen.len() == d {
                    break;
                }
                let mut r: Vec<PScalar> = v2.row(i).to_vec();
                for _ in 0..2 {
                    for q in &basis {
                        let c = r.iter().zip(q).fold(PScalar::zero(level), |acc, (a, b)| acc + a * b);
                        for (x, y) in r.iter_mut().zip(q) {
                            *x -= &c * y;
                        }
                    }
                }
                let norm = r.iter().fold(PScalar::zero(level), |acc, x| acc + x.square()).sqrt();
                if norm > tol {
                    basis.push(r.iter().map(|x| x / &norm).collect());
                    chosen.push(i);
                }
            }
            if chosen.len() != d {
                return Err(Error::Unsolvable(format!(
                    "only {} independent rows found for a nullspace of dimension {d}",
                    chosen.len()
                )));
            }
            chosen.sort_unstable();
            chosen
        }
    };
    let cond = if eliminated.is_empty() {
        Some(1.0)
    } else {
        v22_condition(v2, &eliminated).map(|c| c.to_f64())
    };
    match cond {
        Some(c) if c < limit => {}
        _ => {
            let names: Vec<String> = eliminated.iter().map(|&i| param_label(i)).collect();
            let msg = format!("V22 on {{{}}} has condition {:e}", names.join(", "), cond.unwrap_or(f64::INFINITY));
            return Err(if pinned.is_some() {
                Error::PinnedSingular(msg)
            } else {
                Error::Unsolvable(msg)
            });
        }
    }
    let kept = (0..n).filter(|i| eliminated.binary_search(i).is_err()).collect();
    Ok(Partition { kept, eliminated })
}

#[derive(Clone, Debug)]
pub struct BaseParamSolution {
    pub partition: Partition,
    /// `r × (n−r)`, rows follow `partition.kept`, columns `partition.eliminated`.
    pub beta: Matrix,
    pub level: PrecisionLevel,
    pub rank: usize,
    /// Rank supplied by the caller rather than certified.
    pub forced: bool,
    pub v22_condition: f64,
}

/// β = −V21·V22⁻¹ from an SVD and a rank.
pub fn base_parameters(
    s: &SvdResult,
    rank: usize,
    forced: bool,
    pinned: Option<&[usize]>,
) -> Result<BaseParamSolution, Error> {
    let level = s.level;
    let n = s.v.rows();
    if rank > n {
        return Err(Error::Unsolvable(format!("rank {rank} exceeds {n} parameters")));
    }
    let v2 = s.nullspace(rank);
    let partition = choose_partition(&v2, level, pinned)?;
    let v21 = v2.select_rows(&partition.kept);
    let v22 = v2.select_rows(&partition.eliminated);
    if partition.eliminated.is_empty() {
        return Ok(BaseParamSolution {
            partition,
            beta: Matrix::zeros(rank, 0, level),
            level,
            rank,
            forced,
            v22_condition: 1.0,
        });
    }
    let v22_condition = v22_condition(&v2, &partition.eliminated).map_or(f64::INFINITY, |c| c.to_f64());
    let beta = {
        let lu = Lu::new(&v22.transpose()).ok_or_else(|| Error::Unsolvable("V22 is singular".into()))?;
        let minus_v21t = Matrix::zeros(v21.cols(), v21.rows(), level).sub(&v21.transpose());
        lu.solve_matrix(&minus_v21t).transpose()
    };
    Ok(BaseParamSolution {
        partition,
        beta,
        level,
        rank,
        forced,
        v22_condition,
    })
}

/// Convenience wrapper computing the SVD first.
pub fn base_parameters_of(
    w: &Matrix,
    level: PrecisionLevel,
    rank: usize,
    forced: bool,
    pinned: Option<&[usize]>,
) -> Result<BaseParamSolution, Error> {
    base_parameters(&svd(w, level)?, rank, forced, pinned)
}

impl BaseParamSolution {
    /// φ_b = φ1 + β·φ2.
    pub fn reduce(&self, phi: &[PScalar]) -> Vec<PScalar> {
        if self.partition.eliminated.is_empty() {
            return self.partition.kept.iter().map(|&i| phi[i].clone()).collect();
        }
        let p2: Vec<PScalar> = self.partition.eliminated.iter().map(|&j| phi[j].clone()).collect();
        let bp = self.beta.mul_vec(&p2);
        self.partition
            .kept
            .iter()
            .zip(bp)
            .map(|(&i, b)| &phi[i] + &b)
            .collect()
    }

    /// W_b: the kept columns of W.
    pub fn reduced_matrix(&self, w: &Matrix) -> Matrix {
        w.select_cols(&self.partition.kept)
    }

    /// Entry of β for kept index `kept` and eliminated index `elim`, if both belong.
    pub fn entry(&self, kept: usize, elim: usize) -> Option<&PScalar> {
        let i = self.partition.kept.iter().position(|&k| k == kept)?;
        let j = self.partition.eliminated.iter().position(|&k| k == elim)?;
        Some(&self.beta[(i, j)])
    }

    /// Display threshold below which coefficients are shown as zero.
    pub fn display_threshold(&self) -> f64 {
        10f64.powf(6.0 - self.level.digits() as f64 / 2.0)
    }

    /// One line per base parameter with small coefficients suppressed.
    pub fn render(&self, sig: usize) -> Vec<String> {
        let thr = self.display_threshold();
        self.partition
            .kept
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let mut line = format!("b{:02} = {}", i + 1, param_label(k));
                for (j, &e) in self.partition.eliminated.iter().enumerate() {
                    let c = &self.beta[(i, j)];
                    if c.to_f64().abs() < thr {
                        continue;
                    }
                    let sign = if c.is_sign_negative() { '-' } else { '+' };
                    line.push_str(&format!(" {sign} {}*{}", c.abs().to_short_string(sig), param_label(e)));
                }
                line
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "digits": self.level.to_string(),
            "rank": self.rank,
            "forced_rank": self.forced,
            "v22_condition": self.v22_condition,
            "kept": self.partition.kept.iter().map(|&i| param_label(i)).collect::<Vec<_>>(),
            "eliminated": self.partition.eliminated.iter().map(|&i| param_label(i)).collect::<Vec<_>>(),
            "beta": (0..self.beta.rows()).map(|i| self.beta.row(i).iter().map(PScalar::to_decimal_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}
