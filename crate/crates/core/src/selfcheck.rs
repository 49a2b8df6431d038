//! Cross-engine oracle suite run by `arcsine-fock selfcheck`.
//!
//! Each suite compares two independent routes to the same quantity and stops
//! at the first counterexample.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::error::Result;
use crate::fock::{enumerate_balanced_words, JacobiSequence, NumberState};
use crate::laws::validate_moments;
use crate::moments::{
    moment_by_tridiagonal, moment_by_words, moment_envelope, unscaled_moments, word_matrix_element,
    MomentSequence,
};
use crate::scalar::{format_exact, int, ratio, ExactScalar};
use crate::spectral::hermite_spectrum_gap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    WordsVsTridiagonal,
    OddVanishing,
    WordSandwich,
    EnvelopeContainment,
    DensityVsSpectrum,
    HankelPsd,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::WordsVsTridiagonal,
        Suite::OddVanishing,
        Suite::WordSandwich,
        Suite::EnvelopeContainment,
        Suite::DensityVsSpectrum,
        Suite::HankelPsd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::WordsVsTridiagonal => "words-vs-tridiagonal",
            Suite::OddVanishing => "odd-vanishing",
            Suite::WordSandwich => "word-sandwich",
            Suite::EnvelopeContainment => "envelope-containment",
            Suite::DensityVsSpectrum => "density-vs-spectrum",
            Suite::HankelPsd => "hankel-psd",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Smaller grids, well under ten seconds in a debug build.
    pub fast: bool,
    /// Corrupts the first comparison of this suite; used to test the
    /// failure path.
    pub inject_fault: Option<Suite>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub counterexample: Option<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    /// One verdict line, e.g. `PASS words-vs-tridiagonal (1375 cases)`.
    /// Timing is left out so that reports are reproducible.
    pub fn verdict(&self) -> String {
        let head = format!(
            "{} {} ({} cases)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.cases,
        );
        match &self.counterexample {
            Some(c) => format!("{head}: {c}"),
            None => head,
        }
    }
}

/// Sequences exercised by the cross-engine checks: standard, q = 0, 1/2, 1
/// and an explicit list with `omega(n) = (n^2 + 1) / (n + 2)`, `n <= 32`.
pub fn reference_sequences() -> Vec<JacobiSequence> {
    vec![
        JacobiSequence::standard(),
        JacobiSequence::q_deformed(int(0)).expect("q = 0"),
        JacobiSequence::q_deformed(ratio(1, 2)).expect("q = 1/2"),
        JacobiSequence::q_deformed(int(1)).expect("q = 1"),
        reference_explicit(),
    ]
}

pub fn reference_explicit() -> JacobiSequence {
    JacobiSequence::explicit((1..=32i64).map(|n| ratio(n * n + 1, n + 2)).collect())
        .expect("positive weights")
}

pub fn run(opts: &Options) -> Result<Vec<SuiteReport>> {
    Suite::ALL.iter().map(|&s| run_suite(s, opts)).collect()
}

pub fn run_suite(suite: Suite, opts: &Options) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut ctx = Ctx {
        cases: 0,
        fault: opts.inject_fault == Some(suite),
    };
    let counterexample = match suite {
        Suite::WordsVsTridiagonal => words_vs_tridiagonal(&mut ctx, opts.fast)?,
        Suite::OddVanishing => odd_vanishing(&mut ctx, opts.fast)?,
        Suite::WordSandwich => word_sandwich(&mut ctx, opts.fast)?,
        Suite::EnvelopeContainment => envelope_containment(&mut ctx, opts.fast)?,
        Suite::DensityVsSpectrum => density_vs_spectrum(&mut ctx, opts.fast)?,
        Suite::HankelPsd => hankel_psd(&mut ctx, opts.fast)?,
    };
    Ok(SuiteReport {
        suite,
        cases: ctx.cases,
        counterexample,
        elapsed: start.elapsed(),
    })
}

struct Ctx {
    cases: usize,
    fault: bool,
}

impl Ctx {
    /// Counts a case; the first one is perturbed when a fault is injected.
    fn perturb(&mut self, x: ExactScalar) -> ExactScalar {
        self.cases += 1;
        if std::mem::take(&mut self.fault) {
            x + ratio(1, 1_000_000_007)
        } else {
            x
        }
    }

    /// Counts a case and reports whether it should be corrupted.
    fn take_fault(&mut self) -> bool {
        self.cases += 1;
        std::mem::take(&mut self.fault)
    }

    fn perturb_f64(&mut self, x: f64) -> f64 {
        self.cases += 1;
        if std::mem::take(&mut self.fault) {
            x + 1.0
        } else {
            x
        }
    }
}

type Outcome = Result<Option<String>>;

fn words_vs_tridiagonal(ctx: &mut Ctx, fast: bool) -> Outcome {
    let (max_n, max_order) = if fast { (4, 6) } else { (8, 10) };
    for seq in reference_sequences() {
        for n in 0..=max_n {
            let state = NumberState::new(n);
            for scale in [int(1), ratio(3, 2)] {
                for order in 0..=max_order {
                    let w = moment_by_words(&seq, state, order, &scale)?;
                    let t = ctx.perturb(moment_by_tridiagonal(&seq, state, order, &scale)?);
                    if w != t {
                        return Ok(Some(format!(
                            "{seq} N={n} order={order} s={scale}: words={} tridiagonal={}",
                            format_exact(&w),
                            format_exact(&t)
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn odd_vanishing(ctx: &mut Ctx, fast: bool) -> Outcome {
    let max_n = if fast { 8 } else { 20 };
    for seq in reference_sequences() {
        for n in 0..=max_n {
            for order in (1..=11).step_by(2) {
                let v =
                    ctx.perturb(unscaled_moments(&seq, NumberState::new(n), order)?[order].clone());
                if !v.is_zero() {
                    return Ok(Some(format!(
                        "{seq} N={n} order={order}: {}",
                        format_exact(&v)
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn word_sandwich(ctx: &mut Ctx, fast: bool) -> Outcome {
    let (max_m, max_n) = if fast { (3, 6) } else { (5, 8) };
    let std = JacobiSequence::standard();
    for m in 1..=max_m {
        let words = enumerate_balanced_words(m)?;
        for n in m..=max_n {
            let ni = n as i64;
            let lo: i64 = (0..m as i64).map(|i| ni - i).product();
            let hi: i64 = (1..=m as i64).map(|i| ni + i).product();
            for w in &words {
                let mut e = word_matrix_element(&std, NumberState::new(n), w)?;
                if ctx.take_fault() {
                    e = int(hi + 1);
                }
                if e < int(lo) || e > int(hi) {
                    return Ok(Some(format!(
                        "N={n} word={w}: {} outside [{lo}, {hi}]",
                        format_exact(&e)
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn envelope_containment(ctx: &mut Ctx, fast: bool) -> Outcome {
    let max_n = if fast { 10 } else { 50 };
    let std = JacobiSequence::standard();
    for n in 1..=max_n {
        let scale = int(n as i64);
        let moments = MomentSequence::compute(&std, NumberState::new(n), &scale, 10)?;
        for m in 0..=5 {
            let env = moment_envelope(n, 2 * m)?;
            let v = if ctx.take_fault() {
                &env.upper + int(1)
            } else {
                moments.values[2 * m].clone()
            };
            if !env.contains(&v) {
                return Ok(Some(format!(
                    "N={n} order={}: {} outside [{}, {}]",
                    2 * m,
                    format_exact(&v),
                    format_exact(&env.lower),
                    format_exact(&env.upper)
                )));
            }
        }
    }
    Ok(None)
}

/// Tolerance on the smoothed-CDF gap between density and spectrum.
pub const DENSITY_SPECTRUM_TOL: f64 = 1e-6;

fn density_vs_spectrum(ctx: &mut Ctx, fast: bool) -> Outcome {
    let max_n = if fast { 3 } else { 10 };
    for n in 0..=max_n {
        let gap = ctx.perturb_f64(hermite_spectrum_gap(n, n + 128)?);
        if gap.is_nan() || gap > DENSITY_SPECTRUM_TOL {
            return Ok(Some(format!(
                "N={n} K={}: smoothed CDF gap {gap:e} > {DENSITY_SPECTRUM_TOL:e}",
                n + 128
            )));
        }
    }
    Ok(None)
}

fn hankel_psd(ctx: &mut Ctx, fast: bool) -> Outcome {
    let max_n = if fast { 5 } else { 10 };
    for seq in reference_sequences() {
        for n in 0..=max_n {
            let state = NumberState::new(n);
            let scale = seq.canonical_scale(state)?;
            let mut values = MomentSequence::compute(&seq, state, &scale, 10)?.values;
            if ctx.take_fault() {
                values[2] = int(-1);
            }
            if !validate_moments(&values) {
                return Ok(Some(format!("{seq} N={n}: Hankel matrix not PSD")));
            }
        }
    }
    Ok(None)
}
