#################################################################################
#            Demo: where the mixed-norm filter actually wins                    #
#################################################################################
#                                                                               #
#  The fourth-power error mode has a steady-state deviation floor roughly      #
#  10 * sigma_v^2 times the quadratic mode's floor, so its advantage grows as  #
#  the noise shrinks; but its convergence rate near the floor also scales      #
#  with sigma_v^2, so at very high SNR it never reaches that floor inside a    #
#  realistic window. The sweet spot for the m=4 preset sits around 15 dB SNR,  #
#  where the time-varying mix converges properly and lands about 3 dB below   #
#  LMS. At 30 dB the same preset is still crawling thousands of iterations    #
#  after LMS has converged.                                                    #
#                                                                               #
#################################################################################

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from sparse_afe import ExperimentConfig, run_experiment, table_presets

OUT = Path(__file__).parent / "output"
SNRS = (10.0, 12.5, 15.0, 17.5, 20.0, 25.0, 30.0)
TRIALS = 30
ITERATIONS = 4000


def main(seed=1):
    roster = tuple(e for e in table_presets(4) if e[0] in ("LMS", "LMMN"))
    gains = []
    print(f"{'SNR dB':>7} {'LMS dB':>9} {'LMMN dB':>9} {'gain dB':>8}")
    for snr in SNRS:
        config = ExperimentConfig(
            sparsity_m=4,
            snr_db=snr,
            iterations=ITERATIONS,
            trials=TRIALS,
            master_seed=seed,
            roster=roster,
        )
        result = run_experiment(config)
        lms = result.result_for("LMS").steady_state_db
        lmmn = result.result_for("LMMN").steady_state_db
        gains.append(lms - lmmn)
        print(f"{snr:>7.1f} {lms:>9.2f} {lmmn:>9.2f} {lms - lmmn:>8.2f}")

    OUT.mkdir(exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(SNRS, gains, "o-")
    ax.axhline(0.0, color="k", linewidth=0.8)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("steady-state gain of LMMN over LMS (dB)")
    ax.set_title(f"m=4 preset, {ITERATIONS} iterations, {TRIALS} trials")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = OUT / "snr_sweep.svg"
    fig.savefig(path)
    plt.close(fig)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
