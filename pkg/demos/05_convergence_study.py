"""Far-field self-convergence ladders through the study harness.

The same machinery drives the command-line tool:

    helmbie study --config configs/kite_table1.cfg --out out/

Here a reduced ladder keeps the runtime small; the full ladders
(N = 96, 128, 160 against a reference at N = 320) live in configs/ and are
exercised by the test suite.  The tilde-family first-kind system is
compared against the unanalyzed plain-V variant of the same formulation;
the tilde family stays ahead at every resolution until both hit roundoff.
"""

from helmbie.harness import StudyConfig, run_convergence

for curve in ("kite", "cavity"):
    cfg = StudyConfig.from_mapping({
        "curve": curve,
        "k_plus": "8.0",
        "k_minus": "32.0",
        "nu": "1.0",
        "formulations": "l2,l2plain",
        "n_ladder": "96,128,160",
        "n_reference": "320",
        "directions": "360",
    })
    print(f"== {curve}: k+ = 8, k- = 32, nu = 1, reference l1 at N = 320")
    report = run_convergence(cfg)
    print(report.to_csv(), end="")
    print()
