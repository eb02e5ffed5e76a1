//! Vortex bookkeeping across a charge sweep: per-step hotel states plus
//! continuous per-vortex trajectories matched between consecutive steps.

use super::{detect_vortices, hotel_state, DetectionParams, HotelState, Vortex};
use crate::field::{
    fractional_field_grid, FractionalCharge, GridSpec, OpticalConfig, TruncationConfig,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// One sampled position along a vortex trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackPoint {
    pub mu: f64,
    pub x: f64,
    pub y: f64,
}

/// A vortex followed across consecutive sweep steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub charge: i32,
    pub points: Vec<TrackPoint>,
}

/// Sweep result: one hotel state per charge value and the matched
/// trajectories (the guest-moves-one-room-up narrative as continuous paths).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub states: Vec<HotelState>,
    pub trajectories: Vec<Trajectory>,
}

/// Match each new detection to the nearest same-charge detection of the
/// previous step within the gate. Two candidates within the gate for the
/// same new vortex make the matching ambiguous: the step outran the
/// resolution, reported as tracking loss.
fn match_step(
    prev: &[Vortex],
    next: &[Vortex],
    gate: f64,
    step: usize,
) -> Result<Vec<Option<usize>>> {
    let mut taken = vec![false; prev.len()];
    let mut assignment = vec![None; next.len()];
    for (j, v) in next.iter().enumerate() {
        let mut in_gate: Vec<(usize, f64)> = prev
            .iter()
            .enumerate()
            .filter(|(_, p)| p.charge == v.charge)
            .map(|(i, p)| (i, p.distance_to(v)))
            .filter(|(_, d)| *d <= gate)
            .collect();
        in_gate.sort_by(|a, b| a.1.total_cmp(&b.1));
        match in_gate.len() {
            0 => {} // a newly created vortex starts its own trajectory
            1 => {
                let (i, _) = in_gate[0];
                if taken[i] {
                    return Err(Error::TrackingLoss {
                        step,
                        message: format!(
                            "two vortices claim the same predecessor near ({:.3e}, {:.3e})",
                            prev[i].x, prev[i].y
                        ),
                    });
                }
                taken[i] = true;
                assignment[j] = Some(i);
            }
            _ => {
                return Err(Error::TrackingLoss {
                    step,
                    message: format!(
                        "vortex at ({:.3e}, {:.3e}) has {} predecessors within the gate",
                        v.x,
                        v.y,
                        in_gate.len()
                    ),
                });
            }
        }
    }
    Ok(assignment)
}

/// Evaluate the field, classify, and track vortices over a strictly
/// increasing list of charges on a fixed grid.
pub fn sweep_track(
    mu_values: &[FractionalCharge],
    grid: &GridSpec,
    optics: &OpticalConfig,
    trunc: &TruncationConfig,
    params: &DetectionParams,
) -> Result<SweepOutcome> {
    if mu_values.is_empty() {
        return Err(Error::invalid("sweep", "sweep needs at least one charge value"));
    }
    for w in mu_values.windows(2) {
        if w[1].value() <= w[0].value() {
            return Err(Error::invalid(
                "sweep",
                format!(
                    "sweep values must be strictly increasing, got {} then {}",
                    w[0].value(),
                    w[1].value()
                ),
            ));
        }
    }

    let mut states = Vec::with_capacity(mu_values.len());
    let mut open: Vec<(usize, Trajectory)> = Vec::new(); // index into prev detections
    let mut done: Vec<Trajectory> = Vec::new();
    let mut prev: Vec<Vortex> = Vec::new();

    for (step, &mu) in mu_values.iter().enumerate() {
        let field = fractional_field_grid(mu, grid, optics, trunc);
        states.push(hotel_state(&field, mu, params)?);
        let floor = params.amplitude_floor_frac * field.max_modulus();
        let detections: Vec<Vortex> = detect_vortices(&field, floor)?
            .into_iter()
            .filter(|v| v.radius() <= params.trust_radius)
            .collect();

        if step == 0 {
            for (j, v) in detections.iter().enumerate() {
                open.push((
                    j,
                    Trajectory {
                        charge: v.charge,
                        points: vec![TrackPoint {
                            mu: mu.value(),
                            x: v.x,
                            y: v.y,
                        }],
                    },
                ));
            }
        } else {
            let assignment = match_step(&prev, &detections, params.pairing_gate, step - 1)?;
            let mut next_open: Vec<(usize, Trajectory)> = Vec::new();
            let mut continued = vec![false; open.len()];
            for (j, assigned) in assignment.iter().enumerate() {
                let point = TrackPoint {
                    mu: mu.value(),
                    x: detections[j].x,
                    y: detections[j].y,
                };
                match assigned {
                    Some(i) => {
                        if let Some(slot) = open.iter().position(|(pi, _)| pi == i) {
                            let mut t = open[slot].1.clone();
                            t.points.push(point);
                            continued[slot] = true;
                            next_open.push((j, t));
                        }
                    }
                    None => next_open.push((
                        j,
                        Trajectory {
                            charge: detections[j].charge,
                            points: vec![point],
                        },
                    )),
                }
            }
            for (slot, (_, t)) in open.into_iter().enumerate() {
                if !continued[slot] {
                    done.push(t); // annihilated or left the window
                }
            }
            open = next_open;
        }
        prev = detections;
    }
    done.extend(open.into_iter().map(|(_, t)| t));
    done.sort_by(|a, b| {
        b.points
            .len()
            .cmp(&a.points.len())
            .then(a.points[0].mu.total_cmp(&b.points[0].mu))
    });
    Ok(SweepOutcome {
        states,
        trajectories: done,
    })
}
