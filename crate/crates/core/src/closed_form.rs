//! Exact closed-form values of the three invariants per (k, l), regime and
//! winding parity, plus regime classification of a spec.

use crate::error::{Error, Result};
use crate::invariants::{Guards, Half};
use crate::kepler::{critical_eccentricity, gcd, Direction, TorusOrbitSpec};
use serde::Serialize;

/// Position of an orbit along the e-homotopy.
///
/// Direct orbits split at the critical eccentricity where the orbit touches
/// the Hill boundary (exterior-loop birth for k > l, interior-loop birth for
/// k < l); retrograde orbits form one regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    DirectBelowThreshold,
    DirectAboveThreshold,
    Retro,
}

/// Classify a spec by direction and eccentricity. Errors when a direct
/// orbit's eccentricity falls inside the guard band around the threshold.
pub fn regime_of(spec: &TorusOrbitSpec, guards: &Guards) -> Result<Regime> {
    if spec.direction() == Direction::Retrograde {
        return Ok(Regime::Retro);
    }
    let e_crit = critical_eccentricity(spec.k(), spec.l())?;
    let e = spec.eccentricity();
    if (e - e_crit).abs() < guards.near_threshold {
        return Err(Error::GuardBand {
            e,
            reason: format!("within the guard band of the threshold e = {e_crit:.6}"),
        });
    }
    if e < e_crit {
        Ok(Regime::DirectBelowThreshold)
    } else {
        Ok(Regime::DirectAboveThreshold)
    }
}

fn validate_pair(k: u32, l: u32) -> Result<(i64, i64)> {
    if k == 0 || l == 0 || gcd(k, l) != 1 || (k == 1 && l == 1) {
        return Err(Error::InvalidSpec(format!(
            "formulas require coprime (k, l) != (1, 1), got ({k}, {l})"
        )));
    }
    Ok((k as i64, l as i64))
}

/// J+ of a T_{k,l}-type orbit in the given regime.
///
/// For k > l there is a single direct case (J+ is constant on the whole
/// direct interval), so both direct regimes map to the same formula.
pub fn jplus_formula(k: u32, l: u32, regime: Regime) -> Result<i64> {
    let (k, l) = validate_pair(k, l)?;
    Ok(match regime {
        Regime::Retro => 1 - k - k * l - l * l,
        _ if k > l => 1 - k + k * l - l * l,
        Regime::DirectBelowThreshold => 1 - k - 2 * k * k + 3 * k * l - l * l,
        Regime::DirectAboveThreshold => 1 - k + k * l - l * l,
    })
}

/// J1 of a T_{k,l}-type orbit in the given regime.
pub fn j1_formula(k: u32, l: u32, regime: Regime) -> Result<Half> {
    let (k, l) = validate_pair(k, l)?;
    let twice = match regime {
        Regime::DirectBelowThreshold if k < l => 2 - 2 * k - 3 * k * k + 4 * k * l - l * l,
        _ => 2 - 2 * k + k * k - l * l,
    };
    Ok(Half::from_twice(twice))
}

/// J2 of a T_{k,l}-type orbit in the given regime. The case split follows
/// the parity of the winding number, which is odd exactly when k and l have
/// different parity.
///
/// Even-winding values come from the layer structure of one preimage
/// component: with m = |k-l| (direct, below threshold) or m = k+l (second
/// direct interval and retrograde), the component has k(m/2 - 1) double
/// points and central winding m/2, so J+ = 1 + k(m/2 - 1) - (m/2)^2, which
/// expands to 1 - k + m(2k - m)/4.
pub fn j2_formula(k: u32, l: u32, regime: Regime) -> Result<i64> {
    let (k, l) = validate_pair(k, l)?;
    let odd_winding = (k + l) % 2 == 1;
    let exact_div = |num: i64, den: i64| -> i64 {
        debug_assert_eq!(num % den, 0, "formula value must be an integer");
        num / den
    };
    Ok(if odd_winding {
        match regime {
            Regime::DirectBelowThreshold if k < l => 1 - 2 * k - 3 * k * k + 4 * k * l - l * l,
            _ => (k - 1) * (k - 1) - l * l,
        }
    } else {
        match regime {
            // m = l - k: m(2k - m) = 4kl - 3k^2 - l^2
            Regime::DirectBelowThreshold if k < l => {
                1 - k + exact_div(4 * k * l - 3 * k * k - l * l, 4)
            }
            // m = k - l and m = k + l both give m(2k - m) = k^2 - l^2
            _ => 1 - k + exact_div(k * k - l * l, 4),
        }
    })
}

/// The closed-form triple (J+, J1, J2) of one spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormTriple {
    pub j_plus: i64,
    pub j1: Half,
    pub j2: i64,
}

pub fn closed_form_triple(spec: &TorusOrbitSpec, guards: &Guards) -> Result<ClosedFormTriple> {
    let regime = regime_of(spec, guards)?;
    Ok(ClosedFormTriple {
        j_plus: jplus_formula(spec.k(), spec.l(), regime)?,
        j1: j1_formula(spec.k(), spec.l(), regime)?,
        j2: j2_formula(spec.k(), spec.l(), regime)?,
    })
}

/// Winding number around the origin in a given regime: l - k on the direct
/// branch, k + l on the retrograde one.
pub fn winding_for_regime(k: u32, l: u32, regime: Regime) -> i64 {
    match regime {
        Regime::Retro => k as i64 + l as i64,
        _ => l as i64 - k as i64,
    }
}
