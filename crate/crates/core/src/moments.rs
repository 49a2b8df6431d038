//! Exact moments `phi_N((X / sqrt(s))^m)` of number states.
//!
//! Two independent engines compute the same numbers:
//!
//! * the word engine expands `(a + a*)^m` into ladder words and evaluates
//!   each matrix element along its level path;
//! * the tridiagonal engine applies the rational matrix similar to `X`
//!   (superdiagonal `1`, subdiagonal `omega(n) / 2`) to the basis vector.
//!
//! Both stay in exact rational arithmetic end to end.

use std::collections::BTreeMap;
use std::io::Write;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{BalancedWords, JacobiSequence, LadderWord, Letter, NumberState, ScaleRule};
use crate::laws::arcsine_moment;
use crate::scalar::{self, format_exact, int, pow, ratio, ExactScalar};

/// Which algorithm evaluates a moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    Words,
    #[default]
    Tridiagonal,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "words" => Ok(Engine::Words),
            "tridiagonal" => Ok(Engine::Tridiagonal),
            other => Err(Error::Parse(other.to_string())),
        }
    }
}

/// `<Phi_N, O Phi_N>` for the ladder product `O` spelled by `word`.
///
/// The rightmost letter acts first. A returning level path crosses every
/// edge `(k - 1, k)` an even number of times `2c`, contributing `omega(k)^c`.
pub fn word_matrix_element(
    seq: &JacobiSequence,
    state: NumberState,
    word: &LadderWord,
) -> Result<ExactScalar> {
    let Some(edges) = edge_traversals(state.index(), word.letters()) else {
        return Ok(ExactScalar::zero());
    };
    let mut acc = ExactScalar::one();
    for (edge, count) in edges {
        debug_assert!(count % 2 == 0);
        acc *= pow(&seq.weight(edge)?, count / 2);
    }
    Ok(acc)
}

/// Edge traversal counts of the level path, or `None` when the path
/// annihilates the vacuum or fails to return to its start.
fn edge_traversals(start: usize, letters: &[Letter]) -> Option<BTreeMap<usize, usize>> {
    let mut level = start;
    let mut edges = BTreeMap::new();
    for letter in letters.iter().rev() {
        match letter {
            Letter::Annihilate => {
                if level == 0 {
                    return None;
                }
                *edges.entry(level).or_insert(0) += 1;
                level -= 1;
            }
            Letter::Create => {
                level += 1;
                *edges.entry(level).or_insert(0) += 1;
            }
        }
    }
    (level == start).then_some(edges)
}

/// `(1 / (2 s))^m` times the sum of all balanced word elements of length `2m`.
///
/// Odd orders have no balanced words and return zero. Limited to
/// `order / 2 <= WORD_ENUMERATION_CAP`.
pub fn moment_by_words(
    seq: &JacobiSequence,
    state: NumberState,
    order: usize,
    scale: &ExactScalar,
) -> Result<ExactScalar> {
    check_scale(scale)?;
    if order % 2 == 1 {
        return Ok(ExactScalar::zero());
    }
    let m = order / 2;
    let mut sum = ExactScalar::zero();
    for word in BalancedWords::new(m)? {
        sum += word_matrix_element(seq, state, &word)?;
    }
    Ok(sum / pow(&(int(2) * scale), m))
}

/// Same quantity as [`moment_by_words`], via repeated application of the
/// rational tridiagonal matrix. No order cap.
pub fn moment_by_tridiagonal(
    seq: &JacobiSequence,
    state: NumberState,
    order: usize,
    scale: &ExactScalar,
) -> Result<ExactScalar> {
    check_scale(scale)?;
    if order % 2 == 1 {
        return Ok(ExactScalar::zero());
    }
    let raw = unscaled_moments(seq, state, order)?;
    Ok(&raw[order] / pow(scale, order / 2))
}

/// Unscaled moments `phi_N(X^k)` for `k = 0..=max_order`, odd orders
/// included as computed (they come out zero, nothing forces them).
///
/// Works on levels `[N - h, N + h]` with `h = max_order / 2`; a path of
/// `k <= max_order` steps that wanders further cannot come back.
pub fn unscaled_moments(
    seq: &JacobiSequence,
    state: NumberState,
    max_order: usize,
) -> Result<Vec<ExactScalar>> {
    let n = state.index();
    let half = max_order / 2;
    let lo = n - n.min(half);
    let hi = n + half;
    let width = hi - lo + 1;
    // half_weight[i] = omega(lo + i) / 2, the entry linking level lo + i to the level below.
    let two = int(2);
    let mut half_weight = Vec::with_capacity(width);
    half_weight.push(if lo == 0 {
        ExactScalar::zero()
    } else {
        seq.weight(lo)? / &two
    });
    for level in lo + 1..=hi {
        half_weight.push(seq.weight(level)? / &two);
    }

    let mut v = vec![ExactScalar::zero(); width];
    v[n - lo] = ExactScalar::one();
    let mut out = Vec::with_capacity(max_order + 1);
    out.push(ExactScalar::one());
    for _ in 0..max_order {
        let mut next = vec![ExactScalar::zero(); width];
        for i in 0..width {
            let mut x = if i + 1 < width {
                v[i + 1].clone()
            } else {
                ExactScalar::zero()
            };
            if i > 0 && !v[i - 1].is_zero() {
                x += &half_weight[i] * &v[i - 1];
            }
            next[i] = x;
        }
        v = next;
        out.push(v[n - lo].clone());
    }
    Ok(out)
}

fn check_scale(scale: &ExactScalar) -> Result<()> {
    if scale.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveScale(format_exact(scale)))
    }
}

/// Dispatches to one of the two engines.
pub fn scaled_moment(
    engine: Engine,
    seq: &JacobiSequence,
    state: NumberState,
    order: usize,
    scale: &ExactScalar,
) -> Result<ExactScalar> {
    match engine {
        Engine::Words => moment_by_words(seq, state, order, scale),
        Engine::Tridiagonal => moment_by_tridiagonal(seq, state, order, scale),
    }
}

/// Exact moments `m_0..=m_M` of one scaled number state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentSequence {
    pub jacobi: JacobiSequence,
    #[serde(rename = "N")]
    pub state: NumberState,
    #[serde(with = "scalar::serde_string")]
    pub scale: ExactScalar,
    #[serde(serialize_with = "serialize_exact_vec")]
    pub values: Vec<ExactScalar>,
}

impl MomentSequence {
    pub fn compute(
        seq: &JacobiSequence,
        state: NumberState,
        scale: &ExactScalar,
        max_order: usize,
    ) -> Result<Self> {
        check_scale(scale)?;
        let raw = unscaled_moments(seq, state, max_order)?;
        let values = raw
            .into_iter()
            .enumerate()
            .map(|(k, x)| {
                if k % 2 == 1 {
                    ExactScalar::zero()
                } else {
                    x / pow(scale, k / 2)
                }
            })
            .collect();
        Ok(Self {
            jacobi: seq.clone(),
            state,
            scale: scale.clone(),
            values,
        })
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, order: usize) -> Option<&ExactScalar> {
        self.values.get(order)
    }
}

fn serialize_exact_vec<S: serde::Serializer>(
    v: &[ExactScalar],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_exact))
}

/// Exact bounds on the scaled standard moment of order `2m` at state `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentEnvelope {
    #[serde(with = "scalar::serde_string")]
    pub lower: ExactScalar,
    #[serde(with = "scalar::serde_string")]
    pub upper: ExactScalar,
    pub order: usize,
    #[serde(rename = "N")]
    pub state: usize,
}

impl MomentEnvelope {
    pub fn contains(&self, x: &ExactScalar) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn width(&self) -> ExactScalar {
        &self.upper - &self.lower
    }
}

/// Sandwich envelope for the standard oscillator with scale `s = N`:
/// every balanced word element lies in
/// `[N (N-1) ... (N-m+1), (N+1) ... (N+m)]`, so the scaled moment lies in
/// `M_2m * [prod (1 - i/N), prod (1 + i/N)]`. For `N < m` the lower
/// product vanishes. Odd orders give the degenerate interval `[0, 0]`.
pub fn moment_envelope(state: usize, order: usize) -> Result<MomentEnvelope> {
    if state == 0 {
        return Err(Error::NonPositiveScale("0".into()));
    }
    if order % 2 == 1 {
        return Ok(MomentEnvelope {
            lower: ExactScalar::zero(),
            upper: ExactScalar::zero(),
            order,
            state,
        });
    }
    let m = order / 2;
    let n = state as i64;
    let target = arcsine_moment(order);
    let mut lower = target.clone();
    let mut upper = target;
    for i in 0..m as i64 {
        lower *= ratio(n - i, n);
        upper *= ratio(n + i + 1, n);
    }
    if lower.is_negative() {
        lower = ExactScalar::zero();
    }
    Ok(MomentEnvelope {
        lower,
        upper,
        order,
        state,
    })
}

/// One `(N, order)` cell of a convergence table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub state: usize,
    pub order: usize,
    #[serde(with = "scalar::serde_string")]
    pub scale: ExactScalar,
    #[serde(with = "scalar::serde_string")]
    pub scaled_moment: ExactScalar,
    #[serde(with = "scalar::serde_string")]
    pub target: ExactScalar,
    #[serde(with = "scalar::serde_string")]
    pub abs_diff: ExactScalar,
    pub envelope: Option<MomentEnvelope>,
}

/// Scaled moments against the arcsine targets. `Ns` and `orders` are
/// sorted and deduplicated; rows come out in `(N, order)` order. The
/// envelope is attached for the standard sequence when the scale is `N`.
pub fn convergence_table(
    seq: &JacobiSequence,
    states: &[usize],
    orders: &[usize],
    rule: &ScaleRule,
) -> Result<Vec<ConvergenceRow>> {
    let mut states = states.to_vec();
    states.sort_unstable();
    states.dedup();
    let mut orders = orders.to_vec();
    orders.sort_unstable();
    orders.dedup();
    let Some(&max_order) = orders.last() else {
        return Ok(Vec::new());
    };

    let mut rows = Vec::with_capacity(states.len() * orders.len());
    for &n in &states {
        let state = NumberState::new(n);
        let scale = rule.resolve(seq, state)?;
        let moments = MomentSequence::compute(seq, state, &scale, max_order)?;
        let envelope_applies = seq.is_standard() && n > 0 && scale == int(n as i64);
        for &order in &orders {
            let scaled_moment = moments.values[order].clone();
            let target = arcsine_moment(order);
            let abs_diff = (&scaled_moment - &target).abs();
            let envelope = if envelope_applies && order % 2 == 0 {
                Some(moment_envelope(n, order)?)
            } else {
                None
            };
            rows.push(ConvergenceRow {
                state: n,
                order,
                scale: scale.clone(),
                scaled_moment,
                target,
                abs_diff,
                envelope,
            });
        }
    }
    Ok(rows)
}

pub const CONVERGENCE_CSV_HEADER: [&str; 7] = [
    "N",
    "order",
    "scaled_moment",
    "target",
    "abs_diff",
    "env_lo",
    "env_hi",
];

/// Writes rows as CSV with exact rational strings; envelope columns are
/// empty when no envelope applies.
pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CONVERGENCE_CSV_HEADER)?;
    for r in rows {
        let (lo, hi) = match &r.envelope {
            Some(e) => (format_exact(&e.lower), format_exact(&e.upper)),
            None => (String::new(), String::new()),
        };
        w.write_record([
            r.state.to_string(),
            r.order.to_string(),
            format_exact(&r.scaled_moment),
            format_exact(&r.target),
            format_exact(&r.abs_diff),
            lo,
            hi,
        ])?;
    }
    w.flush()?;
    Ok(())
}
