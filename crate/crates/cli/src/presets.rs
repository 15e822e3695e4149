//! Ready-made experiments reproducing the published figure setups.
//!
//! All presets draw the LoS component with a uniform random phase per
//! entry; with phase-aligned LoS the two users' cascaded channels are
//! nearly parallel and the outage curves saturate. The presets with
//! several known eavesdroppers solve the joint allocation against the
//! binding eavesdropper rather than the one with the largest signal gain.

use risnoma::SchemeId;

use crate::error::{CliError, Result};
use crate::experiment::{Experiment, ScenarioKind, Sweep, SweepVar};

pub const NAMES: [&str; 7] = ["fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"];

fn sweep(var: SweepVar, start: f64, stop: f64, step: f64) -> Sweep {
    Sweep { var, start, stop, step }
}

fn build(
    name: &str,
    scenario: ScenarioKind,
    sweep: Sweep,
    schemes: &[SchemeId],
    trials: usize,
    overrides: &[(&str, &str)],
) -> Experiment {
    let mut exp = Experiment::new(scenario, sweep, schemes.to_vec());
    exp.trials = trials;
    exp.seed = 1;
    exp.output = format!("{name}.csv").into();
    for (key, value) in [("los_phase", "uniform")].iter().chain(overrides) {
        exp.set(key, value).expect("preset keys are valid");
    }
    exp
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<Experiment> {
    use SchemeId::*;
    let sizes = vec![(8, 16), (16, 16), (16, 32)];
    let exp = match name {
        "fig4" => {
            let mut e = build(
                name,
                ScenarioKind::Internal,
                sweep(SweepVar::DU2, 2.5, 4.0, 0.1),
                &[ProposedInternal, BaselineAlg4],
                10_000,
                &[("d_rx", "0.5"), ("d_u1", "2")],
            );
            e.array_sizes = sizes;
            e
        }
        "fig5" | "fig6" => {
            let schemes: &[SchemeId] = if name == "fig5" { &[ProposedInternal, Scheme2] } else { &[ProposedInternal] };
            let mut e = build(
                name,
                ScenarioKind::Internal,
                sweep(SweepVar::DRx, 0.0, 3.0, 0.1),
                schemes,
                1000,
                &[("d_u1", "1"), ("d_u2", "3")],
            );
            e.array_sizes = sizes;
            e
        }
        "fig7" => build(
            name,
            ScenarioKind::ImperfectCsi,
            sweep(SweepVar::T, 0.0, 0.1, 0.02),
            &[ProposedInternal],
            1000,
            &[("d_rx", "0.5"), ("d_u1", "2"), ("d_u2", "3")],
        ),
        "fig8" => {
            let mut e = build(
                name,
                ScenarioKind::ExternalNoCsi,
                sweep(SweepVar::Psi, 0.05, 1.0, 0.05),
                &[ProposedNoCsi, Scheme3],
                1000,
                &[("d_rx", "0.5"), ("d_u1", "2"), ("d_u2", "3"), ("m", "10")],
            );
            e.array_sizes = vec![(16, 16), (16, 32)];
            e
        }
        "fig9" => {
            let mut e = build(
                name,
                ScenarioKind::ExternalCsi,
                sweep(SweepVar::DU2, 2.5, 4.0, 0.1),
                &[ProposedCsi, Scheme4, Scheme5, Scheme6],
                1000,
                &[("d_rx", "0.5"), ("d_u1", "2"), ("ns", "16"), ("nr", "16"), ("allocation_target", "binding")],
            );
            e.eavesdropper_counts = vec![10, 20];
            e
        }
        "fig10" => build(
            name,
            ScenarioKind::DynamicUsers,
            sweep(SweepVar::PDbm, 10.0, 40.0, 2.0),
            &[ProposedCsi, Scheme4, Scheme5, Scheme6],
            1000,
            &[
                ("d_rx", "0.5"),
                ("d_ry", "1"),
                ("d_u1", "3"),
                ("d_u2", "4"),
                ("eav_center", "2"),
                ("user_radius", "0.5"),
                ("ns", "16"),
                ("nr", "16"),
                ("m", "10"),
                ("allocation_target", "binding"),
            ],
        ),
        _ => return Err(CliError::UnknownPreset(name.to_string())),
    };
    Ok(exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for name in NAMES {
            preset(name).unwrap().validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn unknown_preset_lists_names() {
        let msg = preset("fig11").unwrap_err().to_string();
        assert!(msg.contains("fig4") && msg.contains("fig10"));
    }
}
