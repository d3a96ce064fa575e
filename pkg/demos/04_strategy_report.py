"""The seven-strategy comparison table at default settings.

Every strategy runs on the full-size grid for ten forcing periods after
settling, so expect about a minute of compute.  The printed table is the
same one the `helixwake compare` command writes to comparison.txt:
streamtube energy gains at 3D/5D/7D, mean power and thrust deltas,
load variances, and pitch-rate activity, all relative to the baseline.
"""

import helixwake as hw

NAMES = ("baseline", "yaw-dipc", "tilt-dipc", "helix-ccw", "helix-cw",
         "dic", "sic")


def main():
    strategies = {n: hw.StrategyConfig.from_name(n) for n in NAMES}
    runs = hw.run_comparison(strategies, hw.TurbineParams(), hw.FlowConditions())
    report = hw.build_report(runs)
    print(report.to_text())


if __name__ == "__main__":
    main()
