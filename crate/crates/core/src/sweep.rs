//! Parameter sweeps over the Werner line and the noise strength, and the
//! extraction of landmarks from them: coherence/entanglement crossovers,
//! entanglement death intervals and coherence zeros.
//!
//! Grid points are evaluated in parallel on the current rayon pool; output
//! order is always `(r, p)` ascending regardless of scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{apply_local, ChannelKind, DecoherenceParameter, KrausChannel};
use crate::error::{Error, Result};
use crate::measures::{concurrence_general, reqc};
use crate::states::{werner, WernerParameter};
use crate::scalar::Real;

/// Noise-strength values used for the channel figures when none are given.
pub const DEFAULT_R_VALUES: [f64; 4] = [0.4, 0.6, 0.8, 1.0];
pub const DEFAULT_COUNT: usize = 201;
pub const DEFAULT_EPS_ZERO: f64 = 1e-9;
pub const BISECTION_MAX_ITER: usize = 60;
pub const BISECTION_TOL: f64 = 1e-10;
/// Finite-difference slope below which coherence counts as frozen.
pub const PLATEAU_SLOPE: f64 = 1e-6;

/// Evenly spaced grid `start, …, stop` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid<T> {
    pub start: T,
    pub stop: T,
    pub count: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(start: T, stop: T, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Config(format!("grid count must be >= 2, got {count}")));
        }
        if !(start < stop) {
            return Err(Error::Config(format!("grid start {start} must be < stop {stop}")));
        }
        if start < T::zero() || stop > T::one() {
            return Err(Error::Config(format!(
                "grid [{start}, {stop}] must lie within [0, 1]"
            )));
        }
        Ok(Self { start, stop, count })
    }

    pub fn unit(count: usize) -> Result<Self> {
        Self::new(T::zero(), T::one(), count)
    }

    pub fn point(&self, i: usize) -> T {
        if i + 1 == self.count {
            return self.stop;
        }
        let n = T::from_usize(self.count - 1).expect("count fits");
        let k = T::from_usize(i).expect("index fits");
        self.start + (self.stop - self.start) * k / n
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.count).map(|i| self.point(i)).collect()
    }

    pub fn spacing(&self) -> T {
        (self.stop - self.start) / T::from_usize(self.count - 1).expect("count fits")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig<T> {
    /// `None` sweeps `r` at `p = 0`.
    pub channel: Option<ChannelKind>,
    pub r_values: Vec<T>,
    pub p_grid: Grid<T>,
    /// Apply the channel to both qubits (the figure setting) or to qubit A only.
    pub both_qubits: bool,
}

impl<T: Real> SweepConfig<T> {
    pub fn new(channel: Option<ChannelKind>, r_values: Vec<T>, p_grid: Grid<T>) -> Result<Self> {
        if r_values.is_empty() {
            return Err(Error::Config("at least one r value is required".into()));
        }
        for &r in &r_values {
            WernerParameter::new(r)?;
        }
        Ok(Self {
            channel,
            r_values,
            p_grid,
            both_qubits: true,
        })
    }

    pub fn one_sided(mut self) -> Self {
        self.both_qubits = false;
        self
    }
}

/// One sample of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord<T> {
    pub r: T,
    pub p: T,
    pub reqc: T,
    pub concurrence: T,
}

/// Which swept variable a record list is ordered by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    R,
    P,
}

impl Axis {
    fn of<T: Copy>(self, rec: &SweepRecord<T>) -> T {
        match self {
            Axis::R => rec.r,
            Axis::P => rec.p,
        }
    }
}

/// Evolves `werner(r)` under `channel` at strength `p` and measures it.
pub fn evaluate<T: Real>(
    channel: Option<ChannelKind>,
    r: T,
    p: T,
    both_qubits: bool,
) -> Result<SweepRecord<T>> {
    let mut rho = werner(WernerParameter::new(r)?);
    let p = DecoherenceParameter::new(p)?;
    if let Some(kind) = channel {
        let ch = kind.channel(p)?;
        let other = if both_qubits {
            ch.clone()
        } else {
            KrausChannel::identity()
        };
        rho = apply_local(&ch, &other, &rho)?;
    }
    Ok(SweepRecord {
        r,
        p: p.value(),
        reqc: reqc(&rho)?,
        concurrence: concurrence_general(&rho)?,
    })
}

/// Werner line at `p = 0`.
pub fn sweep_r<T: Real>(grid: &Grid<T>) -> Result<Vec<SweepRecord<T>>> {
    grid.points()
        .into_par_iter()
        .map(|r| evaluate(None, r, T::zero(), true))
        .collect()
}

/// Every `(r, p)` pair of the config, ordered by `r` then `p`.
pub fn sweep_p<T: Real>(config: &SweepConfig<T>) -> Result<Vec<SweepRecord<T>>> {
    let channel = config
        .channel
        .ok_or_else(|| Error::Config("sweep_p needs a channel".into()))?;
    let ps = config.p_grid.points();
    let pairs: Vec<(T, T)> = config
        .r_values
        .iter()
        .flat_map(|&r| ps.iter().map(move |&p| (r, p)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(r, p)| evaluate(Some(channel), r, p, config.both_qubits))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeadZoneThreshold<T>(T);

impl<T: Real> DeadZoneThreshold<T> {
    pub fn new(eps_zero: T) -> Result<Self> {
        if eps_zero > T::zero() && eps_zero.is_finite() {
            Ok(Self(eps_zero))
        } else {
            Err(Error::Domain {
                name: "eps_zero",
                value: eps_zero.as_f64(),
                range: "(0, inf)",
            })
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

impl<T: Real> Default for DeadZoneThreshold<T> {
    fn default() -> Self {
        Self(T::lit(DEFAULT_EPS_ZERO))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<T> {
    pub start: T,
    pub end: T,
}

impl<T: Real> Interval<T> {
    pub fn midpoint(&self) -> T {
        (self.start + self.end) * T::lit(0.5)
    }

    pub fn contains(&self, x: T) -> bool {
        self.start <= x && x <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoints<T> {
    /// Interior abscissae where `reqc = concurrence`.
    pub crossovers: Vec<T>,
    /// Maximal ranges with `concurrence <= eps_zero`. A zero seen only at a
    /// single grid endpoint is a limit, not a death interval, and is omitted.
    pub death_intervals: Vec<Interval<T>>,
    /// Ranges with `reqc <= eps_zero`.
    pub reqc_zeros: Vec<Interval<T>>,
    /// Ranges where coherence is nonzero and frozen (informational).
    pub reqc_plateaus: Vec<Interval<T>>,
}

/// Shrinks `[inside, outside]` around the boundary of `pred`, where
/// `pred(inside)` is true and `pred(outside)` is false. Returns the final
/// bracket as (inside, outside).
fn bisect<T: Real, F>(mut inside: T, mut outside: T, pred: F) -> Result<(T, T)>
where
    F: Fn(T) -> Result<bool>,
{
    let tol = T::lit(BISECTION_TOL);
    for _ in 0..BISECTION_MAX_ITER {
        if (outside - inside).abs() <= tol {
            break;
        }
        let mid = (inside + outside) * T::lit(0.5);
        if pred(mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok((inside, outside))
}

/// Interior sign changes of `reqc − concurrence`, each refined by bisection
/// on `eval`. Ties at the first and last records are ignored.
pub fn find_crossover<T: Real, F>(records: &[SweepRecord<T>], axis: Axis, eval: F) -> Result<Vec<T>>
where
    F: Fn(T) -> Result<SweepRecord<T>>,
{
    let tie = T::lit(T::REQC_CLAMP);
    let sign = |d: T| {
        if d.abs() <= tie {
            0
        } else if d > T::zero() {
            1
        } else {
            -1
        }
    };
    let diff = |rec: &SweepRecord<T>| rec.reqc - rec.concurrence;

    let mut out = Vec::new();
    let mut last: Option<(usize, i32)> = None;
    for (i, rec) in records.iter().enumerate() {
        let s = sign(diff(rec));
        if s == 0 {
            continue;
        }
        if let Some((j, sj)) = last {
            if sj != s {
                if i == j + 1 {
                    let lo = axis.of(&records[j]);
                    let hi = axis.of(&records[i]);
                    let (a, b) = bisect(lo, hi, |x| Ok(sign(diff(&eval(x)?)) == sj))?;
                    out.push((a + b) * T::lit(0.5));
                } else {
                    // exact tie on interior grid points between the brackets
                    let mid = (j + 1 + i - 1) / 2;
                    out.push(axis.of(&records[mid]));
                }
            }
        }
        last = Some((i, s));
    }
    Ok(out)
}

/// Maximal runs of records satisfying `is_zero`, with both edges refined by
/// bisection on the continuous function unless they sit on a grid endpoint.
fn zero_runs<T: Real, Z, F>(
    records: &[SweepRecord<T>],
    axis: Axis,
    is_zero: Z,
    eval: F,
) -> Result<Vec<(Interval<T>, usize, usize)>>
where
    Z: Fn(&SweepRecord<T>) -> bool,
    F: Fn(T) -> Result<SweepRecord<T>>,
{
    let mut out = Vec::new();
    let n = records.len();
    let mut i = 0;
    while i < n {
        if !is_zero(&records[i]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && is_zero(&records[j + 1]) {
            j += 1;
        }
        let start = if i == 0 {
            axis.of(&records[0])
        } else {
            let (inside, outside) =
                bisect(axis.of(&records[i]), axis.of(&records[i - 1]), |x| Ok(is_zero(&eval(x)?)))?;
            (inside + outside) * T::lit(0.5)
        };
        let end = if j + 1 == n {
            axis.of(&records[n - 1])
        } else {
            let (inside, outside) =
                bisect(axis.of(&records[j]), axis.of(&records[j + 1]), |x| Ok(is_zero(&eval(x)?)))?;
            (inside + outside) * T::lit(0.5)
        };
        out.push((Interval { start, end }, i, j));
        i = j + 1;
    }
    Ok(out)
}

/// Ranges where the concurrence vanishes (entanglement sudden death).
pub fn find_death_intervals<T: Real, F>(
    records: &[SweepRecord<T>],
    axis: Axis,
    th: DeadZoneThreshold<T>,
    eval: F,
) -> Result<Vec<Interval<T>>>
where
    F: Fn(T) -> Result<SweepRecord<T>>,
{
    let eps = th.value();
    let n = records.len();
    let runs = zero_runs(records, axis, |r| r.concurrence <= eps, eval)?;
    Ok(runs
        .into_iter()
        .filter(|&(_, i, j)| !(i == j && (i == 0 || j + 1 == n)))
        .map(|(iv, _, _)| iv)
        .collect())
}

/// Ranges where the coherence vanishes. A point zero shows up as a narrow
/// interval whose midpoint locates it.
pub fn find_reqc_zeros<T: Real, F>(
    records: &[SweepRecord<T>],
    axis: Axis,
    th: DeadZoneThreshold<T>,
    eval: F,
) -> Result<Vec<Interval<T>>>
where
    F: Fn(T) -> Result<SweepRecord<T>>,
{
    let eps = th.value();
    Ok(zero_runs(records, axis, |r| r.reqc <= eps, eval)?
        .into_iter()
        .map(|(iv, _, _)| iv)
        .collect())
}

/// Grid segments where coherence is nonzero and its finite-difference slope
/// stays below [`PLATEAU_SLOPE`], merged into maximal intervals.
pub fn find_reqc_plateaus<T: Real>(
    records: &[SweepRecord<T>],
    axis: Axis,
    th: DeadZoneThreshold<T>,
) -> Vec<Interval<T>> {
    let slope_tol = T::lit(PLATEAU_SLOPE);
    let mut out: Vec<Interval<T>> = Vec::new();
    let mut extend_last = false;
    for w in records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let dx = axis.of(b) - axis.of(a);
        let flat = dx > T::zero()
            && a.reqc > th.value()
            && b.reqc > th.value()
            && ((b.reqc - a.reqc) / dx).abs() < slope_tol;
        if flat {
            match out.last_mut() {
                Some(iv) if extend_last => iv.end = axis.of(b),
                _ => out.push(Interval {
                    start: axis.of(a),
                    end: axis.of(b),
                }),
            }
        }
        extend_last = flat;
    }
    out
}

/// Collects every landmark of one record list.
pub fn analyze<T: Real, F>(
    records: &[SweepRecord<T>],
    axis: Axis,
    th: DeadZoneThreshold<T>,
    eval: F,
) -> Result<CriticalPoints<T>>
where
    F: Fn(T) -> Result<SweepRecord<T>>,
{
    Ok(CriticalPoints {
        crossovers: find_crossover(records, axis, &eval)?,
        death_intervals: find_death_intervals(records, axis, th, &eval)?,
        reqc_zeros: find_reqc_zeros(records, axis, th, &eval)?,
        reqc_plateaus: find_reqc_plateaus(records, axis, th),
    })
}

/// Landmarks of the noiseless Werner line.
pub fn critical_points_r<T: Real>(
    grid: &Grid<T>,
    th: DeadZoneThreshold<T>,
) -> Result<(Vec<SweepRecord<T>>, CriticalPoints<T>)> {
    let records = sweep_r(grid)?;
    let cp = analyze(&records, Axis::R, th, |r| evaluate(None, r, T::zero(), true))?;
    Ok((records, cp))
}

/// Landmarks of one Werner state under a noise channel, as a function of `p`.
pub fn critical_points_p<T: Real>(
    channel: ChannelKind,
    r: T,
    grid: &Grid<T>,
    both_qubits: bool,
    th: DeadZoneThreshold<T>,
) -> Result<(Vec<SweepRecord<T>>, CriticalPoints<T>)> {
    let mut config = SweepConfig::new(Some(channel), vec![r], *grid)?;
    config.both_qubits = both_qubits;
    let records = sweep_p(&config)?;
    let cp = analyze(&records, Axis::P, th, |p| {
        evaluate(Some(channel), r, p, both_qubits)
    })?;
    Ok((records, cp))
}
