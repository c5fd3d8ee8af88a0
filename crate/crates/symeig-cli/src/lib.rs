//! Desk-scale experiment harness: seeded batch runs of the eigenvalue
//! surgery with CSV output for external plotting.
//!
//! Per-trial randomness is derived from `(seed, trial-index)`, so trials are
//! order-independent and repeated runs with equal configs emit byte-identical
//! CSV.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use symeig::bounds::{bounds_report, BoundsReport};
use symeig::error::{Error, Result};
use symeig::generate::mix_seed;
use symeig::la;
use symeig::spectral::{
    eig_condition_number, eig_pairs, normalize_x, select_update_pair, ReciprocalPair,
    DEFAULT_TOL_PAIR,
};
use symeig::surgery::{apply_update, build_r, canonical_r, eta_roots, Branch};
use symeig::{c, random_symplectic, C64, SympMatrix};

/// Spectrum magnitude spread of generated trial matrices (decades either
/// side of one); desk-scale analogue of the reference experiments.
pub const DEFAULT_SPREAD: f64 = 2.0;
/// Candidate eigenvalues need at least this pairing scalar to enter a trial.
pub const PAIRING_FLOOR: f64 = 1e-8;

/// Configuration shared by the figure reproductions.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Half dimension `n`; matrices are `2n x 2n`.
    pub n_half: usize,
    pub trials: usize,
    pub seed: u64,
    /// The target is `mu = lambda1 (1 + gamma z)` with `|z| = 1` and
    /// `gamma = gamma_scale * |lambda1|`.
    pub gamma_scale: f64,
    /// Grid resolution per axis for the coefficient sweep.
    pub grid_points: usize,
    /// Half width of the swept square in the complex plane.
    pub grid_halfwidth: f64,
    /// Re-verify condition-number preservation on every trial.
    pub audit: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_half: 20,
            trials: 50,
            seed: 0,
            gamma_scale: 1.0,
            grid_points: 50,
            grid_halfwidth: 1.0,
            audit: false,
        }
    }
}

/// One experiment row.
#[derive(Clone, Debug)]
pub struct TrialRecord {
    pub trial: usize,
    pub lambda1: C64,
    pub mu: C64,
    /// `|lambda1 - mu| / |lambda1|`.
    pub rel_eig_change: f64,
    /// `||S_hat_1 - S||_F / ||S||_F` (direct computation).
    pub rel_change_branch1: Option<f64>,
    /// Same for the second branch; filled by the two-branch experiment.
    pub rel_change_branch2: Option<f64>,
    /// Branch-1 certificate values.
    pub coarse: f64,
    pub sharp_lower: f64,
    pub sharp_upper: f64,
    pub phi: f64,
    pub kappa: f64,
    pub skipped: bool,
}

pub const TRIAL_CSV_HEADER: &str = "trial,lambda1_re,lambda1_im,mu_re,mu_im,rel_eig_change,\
rel_change_branch1,rel_change_branch2,coarse,sharp_lower,sharp_upper,phi,kappa,status";

impl TrialRecord {
    fn skipped(trial: usize) -> Self {
        TrialRecord {
            trial,
            lambda1: c(0.0, 0.0),
            mu: c(0.0, 0.0),
            rel_eig_change: 0.0,
            rel_change_branch1: None,
            rel_change_branch2: None,
            coarse: 0.0,
            sharp_lower: 0.0,
            sharp_upper: 0.0,
            phi: 0.0,
            kappa: 0.0,
            skipped: true,
        }
    }

    pub fn csv_row(&self) -> String {
        if self.skipped {
            return format!("{},,,,,,,,,,,,,skipped", self.trial);
        }
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},ok",
            self.trial,
            self.lambda1.re,
            self.lambda1.im,
            self.mu.re,
            self.mu.im,
            self.rel_eig_change,
            opt(self.rel_change_branch1),
            opt(self.rel_change_branch2),
            self.coarse,
            self.sharp_lower,
            self.sharp_upper,
            self.phi,
            self.kappa
        )
    }
}

/// Batch output: parsed records plus the exact CSV text.
#[derive(Clone, Debug)]
pub struct FigOutput {
    pub records: Vec<TrialRecord>,
    pub csv: String,
}

/// Coefficient-sweep output (one value per grid cell).
#[derive(Clone, Debug)]
pub struct Fig3Output {
    pub csv: String,
    /// values[iy][ix] = min over both branches of the relative change.
    pub values: Vec<Vec<f64>>,
    /// Cell indices (ix, iy) of the sweep minimum.
    pub argmin: (usize, usize),
    /// Cell indices (ix, iy) closest to c = 0.
    pub zero_cell: (usize, usize),
    pub lambda1: C64,
    pub mu: C64,
}

/// Deterministic trial matrix for `(seed, trial)`.
pub fn trial_matrix(n_half: usize, seed: u64, trial: usize) -> Result<SympMatrix> {
    random_symplectic(n_half, mix_seed(seed, trial as u64), DEFAULT_SPREAD)
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(mix_seed(seed ^ 0xa5a5_5a5a_dead_beef, trial as u64))
}

/// Uniform point on the complex unit circle.
pub fn random_unit(rng: &mut impl Rng) -> C64 {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    c(theta.cos(), theta.sin())
}

/// Uniformly random simple, applicable eigenvalue of `s` with pairing above
/// [`PAIRING_FLOOR`]; `None` when every candidate fails.
pub fn select_trial_eigenvalue(s: &SympMatrix, rng: &mut impl Rng) -> Option<ReciprocalPair> {
    let pairs = eig_pairs(s, DEFAULT_TOL_PAIR).ok()?;
    let mut candidates: Vec<C64> = Vec::with_capacity(2 * pairs.len());
    for p in &pairs {
        candidates.push(p.lambda);
        if !p.self_paired {
            candidates.push(p.partner);
        }
    }
    candidates.shuffle(rng);
    for cand in candidates {
        // simplicity under the pairing tolerance
        let close = |v: &C64| (*v - cand).norm() <= DEFAULT_TOL_PAIR * cand.norm().max(1.0);
        let mult = pairs
            .iter()
            .flat_map(|p| [p.lambda, p.partner])
            .filter(close)
            .count();
        if mult != 1 {
            continue;
        }
        match select_update_pair(s, cand, DEFAULT_TOL_PAIR) {
            Ok(pair) if pair.pairing.norm() >= PAIRING_FLOOR => return Some(pair),
            _ => continue,
        }
    }
    None
}

fn rel_change(s: &SympMatrix, pair: &ReciprocalPair, mu: C64, branch: Branch) -> Result<f64> {
    let x = normalize_x(pair)?;
    let coeffs = canonical_r(pair.lambda, mu, branch)?;
    let res = apply_update(s, &x, &coeffs)?;
    Ok(res.delta_frobenius / s.norm_frobenius())
}

fn one_trial(
    config: &ExperimentConfig,
    trial: usize,
    both_branches: bool,
) -> Result<TrialRecord> {
    let s = trial_matrix(config.n_half, config.seed, trial)?;
    let mut rng = trial_rng(config.seed, trial);
    let Some(pair) = select_trial_eigenvalue(&s, &mut rng) else {
        return Ok(TrialRecord::skipped(trial));
    };
    let lambda1 = pair.lambda;
    let gamma = config.gamma_scale * lambda1.norm();
    let z = random_unit(&mut rng);
    let mu = lambda1 * (c(1.0, 0.0) + z * gamma);
    if mu.norm() < 1e-12 * lambda1.norm() {
        return Ok(TrialRecord::skipped(trial));
    }

    let report: BoundsReport = bounds_report(&s, &pair, mu, Branch::One)?;
    let b1 = rel_change(&s, &pair, mu, Branch::One)?;
    let b2 = if both_branches { Some(rel_change(&s, &pair, mu, Branch::Two)?) } else { None };
    let kappa = eig_condition_number(&s, &pair)?;

    if config.audit {
        let x = normalize_x(&pair)?;
        let coeffs = canonical_r(pair.lambda, mu, Branch::One)?;
        let res = apply_update(&s, &x, &coeffs)?;
        audit_condition_numbers(&s, &res.s_hat, lambda1, mu)?;
    }

    Ok(TrialRecord {
        trial,
        lambda1,
        mu,
        rel_eig_change: (lambda1 - mu).norm() / lambda1.norm(),
        rel_change_branch1: Some(b1),
        rel_change_branch2: b2,
        coarse: report.coarse,
        sharp_lower: report.sharp_lower,
        sharp_upper: report.sharp_upper,
        phi: report.phi,
        kappa,
        skipped: false,
    })
}

fn emit_csv(records: &[TrialRecord]) -> String {
    let mut csv = String::from(TRIAL_CSV_HEADER);
    csv.push('\n');
    for r in records {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    csv
}

/// Single-branch batch: one row per trial with the branch-1 relative change
/// and its distance certificates.
pub fn run_fig1(config: &ExperimentConfig) -> Result<FigOutput> {
    let mut records = Vec::with_capacity(config.trials);
    for trial in 0..config.trials {
        records.push(one_trial(config, trial, false)?);
    }
    Ok(FigOutput { csv: emit_csv(&records), records })
}

/// Two-branch batch: rows carry the relative change of both canonical
/// branches, for small/large eigenvalue moves.
pub fn run_fig2(config: &ExperimentConfig) -> Result<FigOutput> {
    let mut records = Vec::with_capacity(config.trials);
    for trial in 0..config.trials {
        records.push(one_trial(config, trial, true)?);
    }
    Ok(FigOutput { csv: emit_csv(&records), records })
}

/// Coefficient sweep: for each grid point `c = x + iy` of the square
/// `[-h, h]^2`, both coefficient matrices with `r11 = r22 = sqrt(c)` are
/// applied and the smaller relative change recorded.
pub fn run_fig3(config: &ExperimentConfig) -> Result<Fig3Output> {
    if config.grid_points < 2 {
        return Err(Error::InvalidValue("grid needs at least 2 points per axis".into()));
    }
    let s = trial_matrix(config.n_half, config.seed, 0)?;
    let mut rng = trial_rng(config.seed, 0);
    let pair = select_trial_eigenvalue(&s, &mut rng).ok_or_else(|| {
        Error::NotApplicable("no applicable simple eigenvalue in the sweep matrix".into())
    })?;
    let lambda1 = pair.lambda;
    let gamma = config.gamma_scale * lambda1.norm();
    let z = random_unit(&mut rng);
    let mu = lambda1 * (c(1.0, 0.0) + z * gamma);

    let x = normalize_x(&pair)?;
    let j = s.j();
    // X^T J^T S is shared by every grid point; each cell is then a rank-two
    // assembly of cost O(n^2).
    let w = x.x.transpose() * j.apply_transpose_left(s.entries())?;
    let snorm = s.norm_frobenius();

    let m = config.grid_points;
    let h = config.grid_halfwidth;
    let coord = |k: usize| -h + 2.0 * h * (k as f64) / ((m - 1) as f64);

    let mut csv = String::from("x,y,min_rel_change\n");
    let mut values = vec![vec![0.0f64; m]; m];
    let mut argmin = (0usize, 0usize);
    let mut zero_cell = (0usize, 0usize);
    let mut best = f64::INFINITY;
    let mut best_c = f64::INFINITY;
    #[allow(clippy::needless_range_loop)]
    for iy in 0..m {
        let y = coord(iy);
        for ix in 0..m {
            let xre = coord(ix);
            let cval = c(xre, y);
            let r_diag = cval.sqrt();
            let (e1, e2) = eta_roots(lambda1, mu, cval)?;
            let mut cell = f64::INFINITY;
            for eta in [e1, e2] {
                let coeffs = build_r(eta, r_diag, r_diag, lambda1, mu)?;
                let r_dyn =
                    symeig::CMatrix::from_fn(2, 2, |i, k| coeffs.r[(i, k)]);
                let delta = &x.x * (r_dyn * &w);
                cell = cell.min(delta.norm() / snorm);
            }
            values[iy][ix] = cell;
            csv.push_str(&format!("{xre},{y},{cell}\n"));
            if cell < best {
                best = cell;
                argmin = (ix, iy);
            }
            if cval.norm() < best_c {
                best_c = cval.norm();
                zero_cell = (ix, iy);
            }
        }
    }
    Ok(Fig3Output { csv, values, argmin, zero_cell, lambda1, mu })
}

/// Verifies that the surgery left every untouched simple eigenvalue's
/// condition number unchanged (relative difference at most `1e-6`) and moved
/// `kappa(S, lambda1)` onto the new pair.
pub fn audit_condition_numbers(
    s: &SympMatrix,
    s_hat: &SympMatrix,
    lambda1: C64,
    mu: C64,
) -> Result<()> {
    let before = la::eig(s.entries(), true)?;
    let after = la::eig(s_hat.entries(), true)?;
    let kappa = |d: &la::EigDecomp, k: usize| -> f64 {
        let u = d.right.column(k);
        let v = d.left.as_ref().expect("left vectors requested").column(k);
        let denom = (v.adjoint() * u)[(0, 0)].norm();
        u.norm() * v.norm() / denom
    };
    let one = c(1.0, 0.0);
    let special = [lambda1, one / lambda1, mu, one / mu];
    let is_simple = |vals: &[C64], v: C64| {
        vals.iter().filter(|w| (**w - v).norm() <= 1e-6 * v.norm().max(1.0)).count() == 1
    };

    let mut checked = 0usize;
    for (k, &nu) in before.values.iter().enumerate() {
        if special.iter().any(|sp| (nu - sp).norm() <= 1e-6 * nu.norm().max(1.0)) {
            continue;
        }
        if !is_simple(&before.values, nu) {
            continue;
        }
        // match by value in the updated spectrum
        let (k2, dist) = after
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (i, (v - nu).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty spectrum");
        if dist > 1e-6 * nu.norm().max(1.0) || !is_simple(&after.values, after.values[k2]) {
            continue;
        }
        let (ka, kb) = (kappa(&before, k), kappa(&after, k2));
        if (ka - kb).abs() > 1e-6 * ka {
            return Err(Error::NumericalFailure {
                what: format!("condition number of untouched eigenvalue {nu} changed"),
                residual: (ka - kb).abs() / ka,
            });
        }
        checked += 1;
    }
    if checked == 0 {
        return Err(Error::NumericalFailure {
            what: "condition-number audit matched no untouched eigenvalue".into(),
            residual: f64::NAN,
        });
    }

    // kappa(S_hat, mu) = kappa(S, lambda1) for branch 1 (and the pair of a
    // branch-2 update shares the same value).
    let pair_before = select_update_pair(s, lambda1, DEFAULT_TOL_PAIR)?;
    let pair_after = select_update_pair(s_hat, mu, DEFAULT_TOL_PAIR)?;
    let ka = eig_condition_number(s, &pair_before)?;
    let kb = eig_condition_number(s_hat, &pair_after)?;
    if (ka - kb).abs() > 1e-6 * ka {
        return Err(Error::NumericalFailure {
            what: "condition number was not transplanted onto the new pair".into(),
            residual: (ka - kb).abs() / ka,
        });
    }
    Ok(())
}

/// Parses a complex scalar: `1.5`, `-2i`, `1.5+2i`, `1.5-2.25i`, or `re,im`.
pub fn parse_complex(text: &str) -> std::result::Result<C64, String> {
    let t: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some((re, im)) = t.split_once(',') {
        let re: f64 = re.parse().map_err(|_| format!("bad real part: {re}"))?;
        let im: f64 = im.parse().map_err(|_| format!("bad imaginary part: {im}"))?;
        return Ok(c(re, im));
    }
    if let Some(rest) = t.strip_suffix(['i', 'I']) {
        // split at the sign separating real and imaginary parts, skipping a
        // leading sign and exponent signs
        let bytes = rest.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let b = bytes[k];
            if (b == b'+' || b == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(k) => (&rest[..k], &rest[k..]),
            None => ("0", rest),
        };
        let re: f64 = if re_s.is_empty() { 0.0 } else {
            re_s.parse().map_err(|_| format!("bad real part: {re_s}"))?
        };
        let im: f64 = match im_s {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => im_s.parse().map_err(|_| format!("bad imaginary part: {im_s}"))?,
        };
        return Ok(c(re, im));
    }
    let re: f64 = t.parse().map_err(|_| format!("bad number: {t}"))?;
    Ok(c(re, 0.0))
}

/// Median of a nonempty slice.
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("1.5").unwrap(), c(1.5, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), c(0.0, -2.0));
        assert_eq!(parse_complex("1.5+2i").unwrap(), c(1.5, 2.0));
        assert_eq!(parse_complex("1.5-2.25i").unwrap(), c(1.5, -2.25));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("3e-2+1e-3i").unwrap(), c(0.03, 0.001));
        assert_eq!(parse_complex("0.5,-0.25").unwrap(), c(0.5, -0.25));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn median_even_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn fig1_smoke_and_gamma_contract() {
        let config = ExperimentConfig { n_half: 4, trials: 3, seed: 11, ..Default::default() };
        let out = run_fig1(&config).unwrap();
        assert_eq!(out.records.len(), 3);
        for r in &out.records {
            assert!(!r.skipped);
            // |mu - lambda1| / |lambda1| = gamma = |lambda1| by construction
            assert!((r.rel_eig_change - r.lambda1.norm()).abs() <= 1e-12 * r.lambda1.norm());
            let b1 = r.rel_change_branch1.unwrap();
            assert!(r.sharp_lower <= b1 + 1e-10 && b1 <= r.sharp_upper + 1e-10);
            assert!(b1 <= r.coarse + 1e-10);
        }
        assert!(out.csv.starts_with(TRIAL_CSV_HEADER));
        assert_eq!(out.csv.lines().count(), 4);
    }

    #[test]
    fn fig2_fills_both_branches() {
        let config = ExperimentConfig {
            n_half: 4,
            trials: 2,
            seed: 5,
            gamma_scale: 1e-3,
            ..Default::default()
        };
        let out = run_fig2(&config).unwrap();
        for r in &out.records {
            assert!(r.rel_change_branch1.is_some() && r.rel_change_branch2.is_some());
        }
    }

    #[test]
    fn fig3_zero_cell_matches_canonical_minimum() {
        let config = ExperimentConfig { n_half: 4, seed: 3, grid_points: 9, ..Default::default() };
        let out = run_fig3(&config).unwrap();
        assert_eq!(out.values.len(), 9);
        // value at the zero cell within a small offset of the canonical minimum
        let s = trial_matrix(4, 3, 0).unwrap();
        let mut rng = trial_rng(3, 0);
        let pair = select_trial_eigenvalue(&s, &mut rng).unwrap();
        let canonical_min = [Branch::One, Branch::Two]
            .iter()
            .map(|&b| rel_change(&s, &pair, out.mu, b).unwrap())
            .fold(f64::INFINITY, f64::min);
        let (ix, iy) = out.zero_cell;
        // the zero cell sits slightly off c = 0 on an even grid
        assert!(
            (out.values[iy][ix] - canonical_min).abs() <= 0.2 * canonical_min,
            "zero cell {} vs canonical {}",
            out.values[iy][ix],
            canonical_min
        );
    }

    #[test]
    fn audit_passes_on_clean_surgery() {
        let s = trial_matrix(5, 9, 0).unwrap();
        let mut rng = trial_rng(9, 0);
        let pair = select_trial_eigenvalue(&s, &mut rng).unwrap();
        let mu = pair.lambda * c(1.0, 0.45);
        let x = normalize_x(&pair).unwrap();
        let coeffs = canonical_r(pair.lambda, mu, Branch::One).unwrap();
        let res = apply_update(&s, &x, &coeffs).unwrap();
        audit_condition_numbers(&s, &res.s_hat, pair.lambda, mu).unwrap();
    }
}
