//! Sweep of the e-homotopy of a torus family: locate the disaster events
//! (collision, Hill-boundary cusps, inverse self-tangencies) and verify that
//! the invariants stay constant on the regimes where they must.

use crate::closed_form::regime_of;
use crate::error::{Error, Result};
use crate::intersect::{find_double_points, Tolerances};
use crate::invariants::{invariant_report, Guards, Half};
use crate::kepler::{
    critical_eccentricity, default_samples, gcd, orbit_params, sample_orbit, tangency_radius,
    Direction, TorusOrbitSpec,
};
use serde::Serialize;

/// Disaster kinds along a Stark-Zeeman homotopy. `III` (triple points) and
/// `DirectTangency` never occur in the rotating Kepler problem and are never
/// emitted; they exist so reports can state that explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// Collision: loops around the origin are born or die (always at e = 1).
    I0,
    /// Exterior-loop birth at the Hill boundary (direct branch, k > l).
    IInfinity,
    /// Interior-loop birth at the Hill boundary (direct branch, k < l).
    IMinusInfinity,
    /// Crossing through an inverse self-tangency.
    IIPlus,
    III,
    DirectTangency,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyEvent {
    pub kind: EventKind,
    pub eccentricity: f64,
    pub branch: Direction,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub k: u32,
    pub l: u32,
    pub events: Vec<HomotopyEvent>,
    pub warnings: Vec<String>,
}

/// Scan configuration. `n_samples` trades accuracy for speed when counting
/// double points across the grid.
#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    pub grid_points: usize,
    pub e_min: f64,
    pub e_max: f64,
    pub n_samples: Option<usize>,
    /// Bisection tolerance in e for tangency events.
    pub bisect_tol: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            grid_points: 200,
            e_min: 0.01,
            e_max: 0.99,
            n_samples: None,
            bisect_tol: 1e-6,
        }
    }
}

/// Number of double points of the direct orbit at eccentricity `e`, counted
/// with the tangency guard disabled (the scan probes across tangencies).
fn count_double_points(k: u32, l: u32, e: f64, n: usize) -> Result<usize> {
    let spec = TorusOrbitSpec::new(k, l, e, Direction::Direct)?;
    let curve = sample_orbit(&spec, n)?;
    Ok(find_double_points(&curve, &Tolerances::relaxed())?.len())
}

/// Scan the family over an explicit increasing grid of eccentricities in
/// (0, 1). Analytic events (the Hill-boundary cusp and the collision) are
/// placed by their closed forms; inverse self-tangencies are found
/// numerically as jumps in the double-point count of the direct orbit above
/// the threshold and localized by bisection.
pub fn scan_family(k: u32, l: u32, e_grid: &[f64]) -> Result<ScanReport> {
    if k == 0 || l == 0 || gcd(k, l) != 1 || (k == 1 && l == 1) {
        return Err(Error::InvalidSpec(format!(
            "scan requires coprime (k, l) != (1, 1), got ({k}, {l})"
        )));
    }
    if e_grid.windows(2).any(|w| w[0] >= w[1])
        || e_grid.first().map(|&e| e <= 0.0).unwrap_or(true)
        || e_grid.last().map(|&e| e >= 1.0).unwrap_or(true)
    {
        return Err(Error::InvalidSpec(
            "the eccentricity grid must be strictly increasing inside (0, 1)".into(),
        ));
    }

    let mut events = Vec::new();
    let mut warnings = Vec::new();

    let e_crit = critical_eccentricity(k, l)?;
    if k > l {
        events.push(HomotopyEvent {
            kind: EventKind::IInfinity,
            eccentricity: e_crit,
            branch: Direction::Direct,
            detail: format!("cusp at the Hill boundary; {k} exterior loops born"),
        });
    } else {
        events.push(HomotopyEvent {
            kind: EventKind::IMinusInfinity,
            eccentricity: e_crit,
            branch: Direction::Direct,
            detail: format!("cusp at the Hill boundary; {k} interior loops born"),
        });
    }
    events.push(HomotopyEvent {
        kind: EventKind::I0,
        eccentricity: 1.0,
        branch: Direction::Direct,
        detail: "collision torus; loops around the origin are born or die".into(),
    });

    // inverse self-tangencies live strictly above the threshold on the
    // direct branch; probe the double-point count over the grid
    let n = ScanConfig::default()
        .n_samples
        .unwrap_or_else(|| (default_samples(k, l) / 2).max(4096));
    let margin = 5e-3;
    let probe: Vec<f64> = e_grid
        .iter()
        .copied()
        .filter(|&e| e > e_crit + margin)
        .collect();
    let mut counts = Vec::with_capacity(probe.len());
    for &e in &probe {
        counts.push(count_double_points(k, l, e, n)?);
    }
    for w in 0..probe.len().saturating_sub(1) {
        let (e0, e1) = (probe[w], probe[w + 1]);
        let (c0, c1) = (counts[w], counts[w + 1]);
        if c0 == c1 {
            continue;
        }
        let jump = c1 as i64 - c0 as i64;
        if jump.unsigned_abs() as usize != 2 * k as usize {
            warnings.push(format!(
                "double-point count jumps by {jump} across e in ({e0:.4}, {e1:.4}); \
                 expected +-2k = {} for a symmetric tangency orbit (grid may be \
                 under-resolved)",
                2 * k
            ));
        }
        // bisect the jump location
        let (mut lo, mut hi) = (e0, e1);
        while hi - lo > ScanConfig::default().bisect_tol {
            let mid = 0.5 * (lo + hi);
            if count_double_points(k, l, mid, n)? == c0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e_tan = 0.5 * (lo + hi);
        let spec = TorusOrbitSpec::new(k, l, e_tan, Direction::Direct)?;
        let r_inv = tangency_radius(&orbit_params(&spec));
        events.push(HomotopyEvent {
            kind: EventKind::IIPlus,
            eccentricity: e_tan,
            branch: Direction::Direct,
            detail: format!(
                "double-point count changes {c0} -> {c1} on the circle r = {}",
                r_inv.map_or("(none)".into(), |r| format!("{r:.6}")),
            ),
        });
    }

    events.sort_by(|a, b| {
        a.eccentricity
            .partial_cmp(&b.eccentricity)
            .expect("finite eccentricities")
    });
    debug_assert!(events
        .iter()
        .all(|e| e.kind != EventKind::III && e.kind != EventKind::DirectTangency));
    Ok(ScanReport {
        k,
        l,
        events,
        warnings,
    })
}

/// Scan with the default grid: `grid_points` values spread over
/// `(e_min, e_max)`, refined tenfold within 0.05 of the analytic threshold.
pub fn scan_family_default(k: u32, l: u32, config: &ScanConfig) -> Result<ScanReport> {
    if k == 0 || l == 0 || gcd(k, l) != 1 || (k == 1 && l == 1) {
        return Err(Error::InvalidSpec(format!(
            "scan requires coprime (k, l) != (1, 1), got ({k}, {l})"
        )));
    }
    let e_crit = critical_eccentricity(k, l)?;
    let mut grid = Vec::new();
    let m = config.grid_points.max(16);
    for i in 0..=m {
        let e = config.e_min + (config.e_max - config.e_min) * i as f64 / m as f64;
        grid.push(e);
        if (e - e_crit).abs() < 0.05 {
            let step = (config.e_max - config.e_min) / m as f64 / 10.0;
            for j in 1..10 {
                let refined = e + j as f64 * step;
                if refined < config.e_max {
                    grid.push(refined);
                }
            }
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    scan_family(k, l, &grid)
}

/// Numeric invariant triples sampled inside one regime.
#[derive(Clone, Debug, Serialize)]
pub struct RegimeSamples {
    pub regime: &'static str,
    pub eccentricities: Vec<f64>,
    pub triples: Vec<(i64, Half, i64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstancyReport {
    pub k: u32,
    pub l: u32,
    pub regimes: Vec<RegimeSamples>,
}

/// Verify that the numerically computed invariants are constant on the
/// regimes where the theory proves them constant: J+ on each regime
/// separately; (J1, J2) across the whole homotopy for k > l, and on
/// I_direct^1 and on I_direct^2 together with the retrograde branch for
/// k < l. A violation is an error, not a tolerated state.
pub fn constancy_check(
    k: u32,
    l: u32,
    e_samples_per_regime: usize,
    n_samples: Option<usize>,
    guards: &Guards,
) -> Result<ConstancyReport> {
    let e_crit = critical_eccentricity(k, l)?;
    let m = e_samples_per_regime.max(2);
    let spread = |lo: f64, hi: f64| -> Vec<f64> {
        let lo = lo + 0.1 * (hi - lo);
        let hi = hi - 0.1 * (hi - lo);
        (0..m)
            .map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64)
            .collect()
    };

    let mut regimes = Vec::new();
    let run = |name: &'static str, dir: Direction, es: Vec<f64>| -> Result<RegimeSamples> {
        let mut triples = Vec::new();
        for &e in &es {
            let spec = TorusOrbitSpec::new(k, l, e, dir)?;
            let rep = invariant_report(&spec, n_samples, guards)?;
            triples.push((rep.j_plus, rep.j1, rep.j2));
        }
        Ok(RegimeSamples {
            regime: name,
            eccentricities: es,
            triples,
        })
    };

    let below = run(
        "direct_below",
        Direction::Direct,
        spread(guards.near_zero * 2.0, e_crit - guards.near_threshold * 2.0),
    )?;
    // keep clear of tangency events: stay in the lower part of the
    // above-threshold interval
    let above = run(
        "direct_above",
        Direction::Direct,
        spread(
            e_crit + guards.near_threshold * 2.0,
            e_crit + 0.35 * (1.0 - e_crit),
        ),
    )?;
    let retro = run(
        "retro",
        Direction::Retrograde,
        spread(guards.near_zero * 2.0, 0.6),
    )?;

    let assert_same = |sets: &[&RegimeSamples], what: &str, pick: &dyn Fn(&(i64, Half, i64)) -> String| -> Result<()> {
        let mut seen: Option<(String, f64)> = None;
        for s in sets {
            for (e, t) in s.eccentricities.iter().zip(&s.triples) {
                let v = pick(t);
                match &seen {
                    None => seen = Some((v, *e)),
                    Some((first, e0)) if *first != v => {
                        return Err(Error::Constancy(format!(
                            "({k},{l}) {what}: value {v} at e={e:.4} differs from {first} at e={e0:.4}"
                        )));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    };

    let jp = |t: &(i64, Half, i64)| t.0.to_string();
    let j12 = |t: &(i64, Half, i64)| format!("(J1={}, J2={})", t.1, t.2);
    assert_same(&[&below], "J+ on I_direct^1", &jp)?;
    assert_same(&[&above], "J+ on I_direct^2", &jp)?;
    assert_same(&[&retro], "J+ on I_retro", &jp)?;
    if k > l {
        assert_same(&[&below, &above], "J+ on I_direct", &jp)?;
        assert_same(&[&below, &above, &retro], "(J1, J2) along the homotopy", &j12)?;
    } else {
        assert_same(&[&below], "(J1, J2) on I_direct^1", &j12)?;
        assert_same(&[&above, &retro], "(J1, J2) on I_direct^2 + I_retro", &j12)?;
    }

    regimes.push(below);
    regimes.push(above);
    regimes.push(retro);
    Ok(ConstancyReport { k, l, regimes })
}

/// Double-check helper used by tests: regime of an (e, direction) pair.
pub fn regime_for(k: u32, l: u32, e: f64, dir: Direction, guards: &Guards) -> Result<crate::closed_form::Regime> {
    regime_of(&TorusOrbitSpec::new(k, l, e, dir)?, guards)
}
