//! Scratch diagnostics; not part of the public surface.

use softgrip_core::experiments::{run_scenario, Scenario, APPROACH_SLOPE_DEG_PER_S};
use softgrip_core::rig::{contact_point, touch_bending, Mobility, ObjectModel};
use softgrip_core::sensing::FingerGeometry;
use softgrip_core::supervisor::{FingerMode, ReferenceKind};

fn main() {
    // --- 1. from-rest false-trigger scan over approach slopes ---
    println!("== startup ramp safety (no object, noisy, 3 seeds) ==");
    for slope in [2.0, 3.0, 4.0, 5.0, 6.0, 8.0] {
        for seed in [11u64, 77, 1234] {
            let mut s = Scenario::free_tracking();
            s.name = "ramp_probe".into();
            s.duration_s = 40.0;
            s.seed = seed;
            s.references = [
                ReferenceKind::Ramp { slope_deg_per_s: slope, start_s: 0.0 },
                ReferenceKind::Ramp { slope_deg_per_s: slope, start_s: 5.0 },
            ];
            let run = run_scenario(&s).unwrap();
            let fired = run.final_modes.iter().any(|m| *m == FingerMode::Force);
            let mut max_armed_e: f64 = 0.0;
            for row in &run.log.rows {
                for i in 0..2 {
                    if row.duty[i] >= 30.0 && row.mode[i] == FingerMode::Tracking {
                        max_armed_e = max_armed_e.max(row.e_deg[i]);
                    }
                }
            }
            println!(
                "  slope {slope:>3} seed {seed:>5}: fired={fired} max armed e={max_armed_e:.3}"
            );
        }
    }

    // --- 2. light touch at the chosen slope ---
    println!("\n== light touch (mu=0), slope {APPROACH_SLOPE_DEG_PER_S} ==");
    let s = Scenario::light_touch();
    let run = run_scenario(&s).unwrap();
    for (i, sw) in run.switch_steps.iter().enumerate() {
        if let Some(k) = sw {
            let row = &run.log.rows[*k];
            println!(
                "  finger{} switch at t={:.1}: y={:.2} d={:.2}",
                i + 1,
                row.t_s,
                row.y_deg[i],
                row.duty[i]
            );
        }
    }
    let last = run.log.rows.last().unwrap();
    println!(
        "  terminal: e=({:.4},{:.4}) duty=({:.1},{:.1}) Fper=({:.4},{:.4}) |F|={:.4}",
        run.terminal_error_deg[0],
        run.terminal_error_deg[1],
        last.duty[0],
        last.duty[1],
        run.steady_finger_force_n[0],
        run.steady_finger_force_n[1],
        run.terminal_force_n
    );

    // --- 3. force modulation mu=4: duty headroom ---
    println!("\n== force modulation (mu=4) ==");
    let run = run_scenario(&Scenario::force_modulation()).unwrap();
    let last = run.log.rows.last().unwrap();
    let max_duty = run
        .log
        .rows
        .iter()
        .map(|r| r.duty[0].max(r.duty[1]))
        .fold(0.0f64, f64::max);
    println!(
        "  terminal: e=({:.4},{:.4}) duty=({:.1},{:.1}) max duty={:.1} Fper=({:.4},{:.4})",
        run.terminal_error_deg[0],
        run.terminal_error_deg[1],
        last.duty[0],
        last.duty[1],
        max_duty,
        run.steady_finger_force_n[0],
        run.steady_finger_force_n[1],
    );

    // --- 4. single-finger sweep endpoints ---
    println!("\n== single finger press ==");
    for mu in [0.0, 2.0, 5.0] {
        let run = run_scenario(&Scenario::single_finger_press(mu)).unwrap();
        let last = run.log.rows.last().unwrap();
        let max_duty = run.log.rows.iter().map(|r| r.duty[0]).fold(0.0f64, f64::max);
        println!(
            "  mu={mu}: F1={:.4} e1={:.4} duty1={:.1} (max {:.1})",
            run.steady_finger_force_n[0], run.terminal_error_deg[0], last.duty[0], max_duty
        );
    }

    // --- 5. pull-out ---
    println!("\n== pull-out ==");
    let mut geom = FingerGeometry::default();
    geom.base_cm = [-7.5, 0.0];
    let obj = ObjectModel::cylinder_at([0.0, 6.25], Mobility::Fixed);
    let yt = touch_bending(&obj, &geom, softgrip_core::rig::Side::Left).unwrap();
    let cp = contact_point(&geom, softgrip_core::rig::Side::Left, yt, obj.center_cm);
    println!("  bench: touch={yt:.3} contact=({:.3},{:.3})", cp[0], cp[1]);
    for mu in [0.0, 2.0, 5.0] {
        match run_scenario(&Scenario::pullout(mu)) {
            Ok(run) => println!(
                "  mu={mu}: peak={:.4} steady per-finger before pull=({:.4},{:.4})",
                run.peak_pull_force_n, run.steady_finger_force_n[0], run.steady_finger_force_n[1]
            ),
            Err(e) => println!("  mu={mu}: ERROR {e}"),
        }
    }

    // --- 6. asymmetric grasp ---
    println!("\n== asymmetric grasp ==");
    match run_scenario(&Scenario::asymmetric_grasp()) {
        Ok(run) => {
            println!(
                "  displacement before mu raise = {:?} cm, final = {:.4} cm, final modes {:?}",
                run.displacement_before_mu_raise_cm, run.object_displacement_cm, run.final_modes
            );
            let mut last_c = [false, false];
            for row in &run.log.rows {
                if row.contact != last_c {
                    println!(
                        "    t={:>6.1} contact -> {:?} obj=({:.3},{:.3})",
                        row.t_s, row.contact, row.object_cm[0], row.object_cm[1]
                    );
                    last_c = row.contact;
                }
            }
        }
        Err(e) => println!("  ERROR {e}"),
    }
}
