"""Strouhal / amplitude scan for the helix strategy on a coarse grid.

Scans nine forcing frequencies at two amplitudes on a reduced 7-diameter
grid, which keeps the whole scan to a couple of minutes on one core.
Set HELIXWAKE_THREADS to fan the points out over processes.  The
unforced A = 0 row reproduces the baseline at every Strouhal number,
and the forced row peaks at an interior Strouhal number.

The full-size scan is the `helixwake sweep` command with a default grid
config; see the README for the YAML format.
"""

import helixwake as hw


def main():
    spec = hw.SweepSpec(strategy="helix-ccw", st_min=0.1, st_max=0.5,
                        st_count=9, amp_min=0.0, amp_max=2.5, amp_count=2,
                        objective="energy_5d")
    grid = hw.WakeGridConfig(x_extent=7 * 126.4, nx=32, ny=16, nz=16)
    result = hw.run_sweep(spec, grid=grid, dt=0.1, periods=4,
                          snapshots_per_period=8)

    print(result.to_csv())
    best = result.best()
    print("best point: St=%.3g, amplitude=%.3g deg, %+.2f%% energy at 5D"
          % (best.st, best.amplitude, best.objective))


if __name__ == "__main__":
    main()
