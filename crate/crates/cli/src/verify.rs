//! Self-verification suite run by `decolab verify`.

use std::io::{self, Write};

use decolab_core::channels::completeness_deviation;
use decolab_core::sweep::evaluate;
use decolab_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub name: &'static str,
    pub checks: usize,
    /// Worst observed deviation (or, for bound checks, worst violation margin).
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: Option<String>,
}

impl PropertyReport {
    fn from_deviation(name: &'static str, checks: usize, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            checks,
            max_deviation,
            tolerance,
            passed: max_deviation <= tolerance,
            note: None,
        }
    }

    fn failed(name: &'static str, err: Error) -> Self {
        Self {
            name,
            checks: 0,
            max_deviation: f64::NAN,
            tolerance: 0.0,
            passed: false,
            note: Some(err.to_string()),
        }
    }
}

const R_GRID: [f64; 4] = [0.4, 0.6, 0.8, 1.0];

fn p_grid() -> Vec<f64> {
    (0..=100).map(|k| k as f64 / 100.0).collect()
}

fn evolve(kind: ChannelKind, r: f64, p: f64) -> Result<DensityMatrix> {
    let ch = kind.channel(DecoherenceParameter::new(p)?)?;
    apply_symmetric(&ch, &werner_state(r)?)
}

fn kraus_completeness() -> Result<PropertyReport> {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for kind in ChannelKind::NOISE {
        for p in p_grid() {
            worst = worst.max(completeness_deviation(&kind.channel(DecoherenceParameter::new(p)?)?));
            n += 1;
        }
    }
    Ok(PropertyReport::from_deviation("kraus-completeness", n, worst, tol::KRAUS))
}

fn evolved_validity() -> Result<PropertyReport> {
    let mut n = 0;
    let mut worst_x: f64 = 0.0;
    for kind in ChannelKind::NOISE {
        for k in 0..=10 {
            let r = k as f64 / 10.0;
            for p in p_grid() {
                let rho = evolve(kind, r, p)?;
                DensityMatrix::validate(rho.matrix())?;
                worst_x = worst_x.max(states::x_state_deviation(&rho));
                n += 1;
            }
        }
    }
    let mut rep = PropertyReport::from_deviation("evolved-state-validity", n, worst_x, tol::X_STATE);
    rep.note = Some("max off-X entry".into());
    Ok(rep)
}

fn concurrence_routes() -> Result<PropertyReport> {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for kind in ChannelKind::NOISE {
        for r in R_GRID {
            for p in p_grid() {
                let rho = evolve(kind, r, p)?;
                worst = worst.max((concurrence_general(&rho)? - concurrence_x(&rho)?).abs());
                n += 1;
            }
        }
    }
    let mut rep = PropertyReport::from_deviation("concurrence-general-vs-x", n, worst, 1e-9);
    rep.note = Some(format!("max |general - x| = {worst:.3e}"));
    Ok(rep)
}

fn werner_concurrence() -> Result<PropertyReport> {
    let mut worst: f64 = 0.0;
    for k in 0..=100 {
        let r = k as f64 / 100.0;
        let want = ((3.0 * r - 1.0) / 2.0).max(0.0);
        worst = worst.max((concurrence_general(&werner_state(r)?)? - want).abs());
    }
    Ok(PropertyReport::from_deviation("werner-concurrence-closed-form", 101, worst, 1e-9))
}

fn variational_bound(seed: u64) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states: Vec<DensityMatrix> = (0..20).map(|_| random_state(&mut rng)).collect();
    for k in 0..=10 {
        states.push(werner_state(k as f64 / 10.0)?);
    }
    let mut worst: f64 = 0.0;
    for (i, rho) in states.iter().enumerate() {
        let chk = variational_reqc_check(rho, 1000, seed.wrapping_add(i as u64))?;
        worst = worst
            .max((chk.at_dephased - chk.closed_form).abs())
            .max(chk.closed_form - chk.min_sampled)
            .max(chk.closed_form - chk.min_random);
    }
    Ok(PropertyReport::from_deviation("variational-reqc-bound", states.len(), worst.max(0.0), 1e-9))
}

fn unitality() -> Result<PropertyReport> {
    let mixed = DensityMatrix::maximally_mixed();
    let mut worst: f64 = 0.0;
    for kind in [ChannelKind::BitFlip, ChannelKind::BitPhaseFlip, ChannelKind::PhaseFlip] {
        for p in p_grid() {
            let ch = kind.channel(DecoherenceParameter::new(p)?)?;
            let out = apply_symmetric(&ch, &mixed)?;
            worst = worst.max(out.matrix().max_abs_diff(mixed.matrix()));
        }
    }
    let ad = amplitude_damping(DecoherenceParameter::new(0.5)?);
    let moved = apply_symmetric(&ad, &mixed)?.matrix().max_abs_diff(mixed.matrix());
    let mut rep = PropertyReport::from_deviation("flip-channels-unital", 303, worst, 1e-12);
    rep.passed &= moved > 1e-3;
    rep.note = Some(format!("amplitude damping moves I/4 by {moved:.3e}"));
    Ok(rep)
}

fn phase_flip_symmetry() -> Result<PropertyReport> {
    let ps = p_grid();
    let mut worst: f64 = 0.0;
    for r in R_GRID {
        for &p in &ps {
            let a = evaluate(Some(ChannelKind::PhaseFlip), r, p, true)?;
            let b = evaluate(Some(ChannelKind::PhaseFlip), r, 1.0 - p, true)?;
            worst = worst
                .max((a.reqc - b.reqc).abs())
                .max((a.concurrence - b.concurrence).abs());
        }
    }
    Ok(PropertyReport::from_deviation("phase-flip-symmetry", 404, worst, 1e-10))
}

fn damping_endpoint() -> Result<PropertyReport> {
    let mut worst: f64 = 0.0;
    for kind in [ChannelKind::PhaseDamping, ChannelKind::AmplitudeDamping] {
        for k in 0..=10 {
            worst = worst.max(evaluate(Some(kind), k as f64 / 10.0, 1.0, true)?.reqc);
        }
    }
    Ok(PropertyReport::from_deviation("damping-erases-coherence", 22, worst, 1e-9))
}

fn eigen_trace(seed: u64) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho: DensityMatrix = random_state(&mut rng);
        let u: SquareMatrix = random_unitary2(&mut rng);
        let uu = kron(&u, &u)?;
        let a = hermitian_eigenvalues(rho.matrix())?;
        let b = hermitian_eigenvalues(&rho.matrix().conjugate_by(&uu))?;
        worst = worst.max((a.sum() - rho.matrix().trace().re).abs());
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(PropertyReport::from_deviation("eigensolver-consistency", 100, worst, 1e-9))
}

/// Runs every property group. Errors inside a group mark that group failed.
pub fn run_suite(seed: u64) -> Vec<PropertyReport> {
    let groups: Vec<(&'static str, Box<dyn Fn() -> Result<PropertyReport>>)> = vec![
        ("kraus-completeness", Box::new(kraus_completeness)),
        ("evolved-state-validity", Box::new(evolved_validity)),
        ("concurrence-general-vs-x", Box::new(concurrence_routes)),
        ("werner-concurrence-closed-form", Box::new(werner_concurrence)),
        ("variational-reqc-bound", Box::new(move || variational_bound(seed))),
        ("flip-channels-unital", Box::new(unitality)),
        ("phase-flip-symmetry", Box::new(phase_flip_symmetry)),
        ("damping-erases-coherence", Box::new(damping_endpoint)),
        ("eigensolver-consistency", Box::new(move || eigen_trace(seed))),
    ];
    groups
        .into_iter()
        .map(|(name, f)| f().unwrap_or_else(|e| PropertyReport::failed(name, e)))
        .collect()
}

pub fn print_table(w: &mut dyn Write, reports: &[PropertyReport]) -> io::Result<()> {
    writeln!(
        w,
        "{:<32} {:>7} {:>12} {:>10}  result",
        "property", "checks", "max dev", "tol"
    )?;
    for r in reports {
        writeln!(
            w,
            "{:<32} {:>7} {:>12.3e} {:>10.0e}  {}",
            r.name,
            r.checks,
            r.max_deviation,
            r.tolerance,
            if r.passed { "PASS" } else { "FAIL" }
        )?;
        if let Some(note) = &r.note {
            writeln!(w, "    {note}")?;
        }
    }
    Ok(())
}
