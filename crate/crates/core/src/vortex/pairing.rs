//! Room/guest pairing along the dislocation line and regime classification.

use super::{
    detect_vortices, Correspondence, HotelState, Regime, Vortex, VortexPair,
    DEFAULT_AMPLITUDE_FLOOR_FRAC,
};
use crate::field::{ComplexField, FractionalCharge, GridSpec};
use crate::{Error, Result};

/// Knobs for turning raw detections into hotel bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionParams {
    /// Fraction of the peak modulus under which phases are distrusted.
    pub amplitude_floor_frac: f64,
    /// Scale for sweep tracking and for the edge-truncation margin.
    pub pairing_gate: f64,
    /// Detections beyond this radius are window artifacts and ignored.
    pub trust_radius: f64,
}

impl DetectionParams {
    pub const DEFAULT_GATE_PITCHES: f64 = 10.0;
    pub const DEFAULT_TRUST_FRAC: f64 = 0.9;

    pub fn defaults_for(grid: &GridSpec) -> Self {
        DetectionParams {
            amplitude_floor_frac: DEFAULT_AMPLITUDE_FLOOR_FRAC,
            pairing_gate: Self::DEFAULT_GATE_PITCHES * grid.pitch_x(),
            trust_radius: Self::DEFAULT_TRUST_FRAC * grid.half_width(),
        }
    }
}

/// Pair rooms with guests by walking the +1 vortices outward from the
/// origin and giving each the nearest unmatched −1. A +1 left without any
/// guest is a vacant room: the remnant of an annihilated pair. A −1 left
/// without any room cannot happen in a resolved pattern and signals
/// undersampling.
///
/// Input must be sorted by distance from the origin with the central vortex
/// already excluded. No distance cap is applied when matching: past the
/// half-integer point a surviving pair is exactly the one whose guest has
/// drifted far from its room, so a cap would misread the regime (the gate
/// parameter scales sweep tracking and edge pruning instead).
pub fn pair_vortices(vortices: &[Vortex], pairing_gate: f64) -> Result<Vec<VortexPair>> {
    let _ = pairing_gate;
    let rooms: Vec<&Vortex> = vortices.iter().filter(|v| v.charge > 0).collect();
    let guests: Vec<&Vortex> = vortices.iter().filter(|v| v.charge < 0).collect();
    let mut guest_taken = vec![false; guests.len()];
    let mut pairs = Vec::with_capacity(rooms.len());
    for room in &rooms {
        let nearest = guests
            .iter()
            .enumerate()
            .filter(|(i, _)| !guest_taken[*i])
            .min_by(|(_, a), (_, b)| {
                room.distance_to(a).total_cmp(&room.distance_to(b))
            });
        match nearest {
            Some((i, guest)) => {
                guest_taken[i] = true;
                pairs.push(VortexPair {
                    room: **room,
                    guest: Some(**guest),
                    separation: Some(room.distance_to(guest)),
                    annihilated: false,
                });
            }
            None => pairs.push(VortexPair {
                room: **room,
                guest: None,
                separation: None,
                annihilated: true,
            }),
        }
    }
    if let Some(i) = guest_taken.iter().position(|t| !t) {
        return Err(Error::InconsistentSigns(format!(
            "guest at ({:.3e}, {:.3e}) has no room to pair with",
            guests[i].x, guests[i].y
        )));
    }
    pairs.sort_by(|a, b| a.room.radius().total_cmp(&b.room.radius()));
    Ok(pairs)
}

fn frac_distance_to_half(mu: FractionalCharge) -> f64 {
    (mu.frac() - 0.5).abs()
}

/// Classify the hotel regime from the charge and the pairing pattern.
///
/// * integer μ → `Integer` (no pairs may be present);
/// * frac(μ) < 1/2 → `PreHalf`: pairs present, none annihilated;
/// * frac(μ) = 1/2 (within 1e-9) → `Half`, the ∞ ↔ ∞ correspondence;
/// * frac(μ) > 1/2 → `PostHalf`; once annihilation remnants appear the
///   pattern reads ∞ + 1 ↔ ∞.
///
/// A pattern that contradicts the regime the charge implies (annihilations
/// before the half point, or a half-integer charge with nothing resolved)
/// signals that the grid cannot support the analysis.
pub fn classify_regime(
    mu: FractionalCharge,
    pairs: Vec<VortexPair>,
    central_charge: i64,
) -> Result<HotelState> {
    let mu_val = mu.value();
    let annihilated = pairs.iter().filter(|p| p.annihilated).count();
    if mu.is_integer() {
        if !pairs.is_empty() {
            return Err(Error::RegimeContradiction {
                mu: mu_val,
                message: format!("integer charge with {} cut-line pairs", pairs.len()),
            });
        }
        return Ok(HotelState {
            mu: mu_val,
            central_charge,
            pairs,
            regime: Regime::Integer,
            correspondence: Correspondence::Finite,
        });
    }
    let frac = mu.frac();
    let (regime, correspondence) = if frac_distance_to_half(mu) < FractionalCharge::INTEGER_EPS {
        if pairs.is_empty() {
            return Err(Error::RegimeContradiction {
                mu: mu_val,
                message: "half-integer charge but no vortex pairs resolved".to_string(),
            });
        }
        if annihilated > 0 {
            return Err(Error::RegimeContradiction {
                mu: mu_val,
                message: format!("{annihilated} annihilated pairs at the half-integer point"),
            });
        }
        (Regime::Half, Correspondence::InfToInf)
    } else if frac < 0.5 {
        if annihilated > 0 {
            return Err(Error::RegimeContradiction {
                mu: mu_val,
                message: format!("{annihilated} annihilated pairs below the half-integer point"),
            });
        }
        (Regime::PreHalf, Correspondence::Finite)
    } else if annihilated > 0 {
        (Regime::PostHalf, Correspondence::InfPlusOneToInf)
    } else {
        (Regime::PostHalf, Correspondence::Finite)
    };
    Ok(HotelState {
        mu: mu_val,
        central_charge,
        pairs,
        regime,
        correspondence,
    })
}

/// Full bookkeeping for one field: detect, drop window artifacts, split off
/// the central vortices, pair the rest, prune edge-truncated vacancies, and
/// classify.
///
/// Hotel bookkeeping follows the positive-charge convention (rooms are +1
/// counterclockwise vortices), so `mu` must be nonnegative here; the field
/// operations themselves take either sign.
pub fn hotel_state(
    field: &ComplexField,
    mu: FractionalCharge,
    params: &DetectionParams,
) -> Result<HotelState> {
    if mu.value() < 0.0 {
        return Err(Error::invalid(
            "mu",
            "hotel bookkeeping expects mu >= 0 (rooms are +1 vortices); negate the charge",
        ));
    }
    let floor = params.amplitude_floor_frac * field.max_modulus();
    let all = detect_vortices(field, floor)?;
    let trusted: Vec<Vortex> = all
        .into_iter()
        .filter(|v| v.radius() <= params.trust_radius)
        .collect();

    // The integer part of the charge appears as unit vortices clustered at
    // the window center; they are not rooms.
    let central_count = if mu.is_integer() {
        mu.rounded().unsigned_abs() as usize
    } else {
        mu.value().trunc() as usize
    };
    let central_count = central_count.min(trusted.len());
    let central_charge: i64 = trusted[..central_count]
        .iter()
        .map(|v| v.charge as i64)
        .sum();
    let rest: Vec<Vortex> = trusted[central_count..].to_vec();

    if mu.is_integer() && !rest.is_empty() {
        return Err(Error::RegimeContradiction {
            mu: mu.value(),
            message: format!("integer charge with {} extra detections", rest.len()),
        });
    }

    let mut pairs = pair_vortices(&rest, params.pairing_gate)?;

    // A vacant room hugging the trust boundary is a truncation artifact:
    // its guest falls outside the kept window, not into annihilation.
    // Pairs are sorted by room radius, so truncated vacancies sit at the end.
    let max_sep = pairs
        .iter()
        .filter_map(|p| p.separation)
        .fold(0.0, f64::max);
    let margin = params.pairing_gate.max(1.5 * max_sep);
    while let Some(last) = pairs.last() {
        if last.annihilated && params.trust_radius - last.room.radius() < margin {
            pairs.pop();
        } else {
            break;
        }
    }

    classify_regime(mu, pairs, central_charge)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, charge: i32) -> Vortex {
        Vortex { x, y, charge }
    }

    #[test]
    fn empty_detections_pair_to_nothing() {
        assert!(pair_vortices(&[], 1.0).unwrap().is_empty());
    }

    #[test]
    fn alternating_signs_pair_outward() {
        // +, −, +, − along the cut: two full pairs, none annihilated
        let vs = [
            v(1.0, 0.1, 1),
            v(1.5, 0.05, -1),
            v(2.0, 0.1, 1),
            v(2.4, 0.05, -1),
        ];
        let pairs = pair_vortices(&vs, 0.2).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|p| !p.annihilated));
        assert!(pairs[0].room.x < pairs[1].room.x);
        assert!((pairs[0].separation.unwrap() - (0.5f64.powi(2) + 0.05f64.powi(2)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unmatched_room_becomes_vacancy() {
        let vs = [v(1.0, 0.0, 1), v(1.6, 0.0, -1), v(2.5, 0.0, 1)];
        let pairs = pair_vortices(&vs, 0.2).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(!pairs[0].annihilated);
        assert!(pairs[1].annihilated);
        assert!(pairs[1].guest.is_none());
    }

    #[test]
    fn guest_drift_keeps_innermost_pairing() {
        // past the half point: guest drifted toward the next room; the
        // outward walk still binds it to the innermost room and leaves the
        // outer room vacant
        let vs = [v(0.22, 0.09, 1), v(0.38, 0.02, -1), v(0.41, 0.03, 1)];
        let pairs = pair_vortices(&vs, 0.04).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].guest.unwrap().charge, -1);
        assert!(pairs[0].separation.unwrap() > 0.04);
        assert!(pairs[1].annihilated);
    }

    #[test]
    fn lone_guest_is_inconsistent() {
        let vs = [v(1.0, 0.0, -1)];
        assert!(matches!(
            pair_vortices(&vs, 0.2),
            Err(Error::InconsistentSigns(_))
        ));
    }

    fn charge(mu: f64) -> FractionalCharge {
        FractionalCharge::new(mu).unwrap()
    }

    #[test]
    fn classify_integer() {
        let s = classify_regime(charge(1.0), vec![], 1).unwrap();
        assert_eq!(s.regime, Regime::Integer);
        assert_eq!(s.correspondence, Correspondence::Finite);
        assert!(s.pairs.is_empty());
    }

    fn full_pair(x: f64) -> VortexPair {
        VortexPair {
            room: v(x, 0.0, 1),
            guest: Some(v(x + 0.1, 0.0, -1)),
            separation: Some(0.1),
            annihilated: false,
        }
    }

    fn vacant(x: f64) -> VortexPair {
        VortexPair {
            room: v(x, 0.0, 1),
            guest: None,
            separation: None,
            annihilated: true,
        }
    }

    #[test]
    fn classify_through_the_half_transition() {
        let s = classify_regime(charge(1.44), vec![full_pair(0.3)], 1).unwrap();
        assert_eq!(s.regime, Regime::PreHalf);
        assert_eq!(s.correspondence, Correspondence::Finite);

        let s = classify_regime(charge(1.5), vec![full_pair(0.3), full_pair(0.5)], 1).unwrap();
        assert_eq!(s.regime, Regime::Half);
        assert_eq!(s.correspondence, Correspondence::InfToInf);

        let s = classify_regime(charge(1.53), vec![full_pair(0.3), vacant(0.5)], 1).unwrap();
        assert_eq!(s.regime, Regime::PostHalf);
        assert_eq!(s.correspondence, Correspondence::InfPlusOneToInf);
        assert_eq!(s.surviving_pairs(), 1);
        assert_eq!(s.annihilated_pairs(), 1);

        let s = classify_regime(charge(1.7), vec![vacant(0.2)], 1).unwrap();
        assert_eq!(s.regime, Regime::PostHalf);
        assert_eq!(s.correspondence, Correspondence::InfPlusOneToInf);
    }

    #[test]
    fn classify_contradictions() {
        // annihilation before the half point
        assert!(matches!(
            classify_regime(charge(1.44), vec![vacant(0.2)], 1),
            Err(Error::RegimeContradiction { .. })
        ));
        // annihilation at the half point
        assert!(matches!(
            classify_regime(charge(1.5), vec![full_pair(0.3), vacant(0.5)], 1),
            Err(Error::RegimeContradiction { .. })
        ));
        // nothing resolved at the half point
        assert!(matches!(
            classify_regime(charge(1.5), vec![], 1),
            Err(Error::RegimeContradiction { .. })
        ));
        // pairs at integer charge
        assert!(matches!(
            classify_regime(charge(2.0), vec![full_pair(0.1)], 2),
            Err(Error::RegimeContradiction { .. })
        ));
    }

    #[test]
    fn hotel_rejects_negative_charge() {
        let grid = GridSpec::square(1.0, 16).unwrap();
        let f = ComplexField::new(
            grid,
            vec![num_complex::Complex64::new(1.0, 0.0); grid.len()],
        );
        let params = DetectionParams::defaults_for(&grid);
        assert!(matches!(
            hotel_state(&f, charge(-1.5), &params),
            Err(Error::InvalidConfig { .. })
        ));
    }
}
