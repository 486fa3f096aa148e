#!/usr/bin/env python3
"""
Peak shifts and visibility of polarizer-scan fringes
====================================================

Scanning the idler polarizer at a fixed signal angle traces a sinusoidal
coincidence fringe.  For an entangled pair the fringe peak moves when the
signal polarizer turns; for a separable pair it stays put.  This script
tabulates the peak position, its shift against the theta_s = 0 scan, and the
fringe visibility for a few source settings.
"""

from wdmqkd import BiphotonPureState, ProductState, find_theta_max, shift_table

SIGNAL_ANGLES = (0.0, 45.0, 90.0, 135.0)

CASES = (
    ("balanced, in phase       (f=1.00, alpha=0)  ", BiphotonPureState.from_degrees(1.0, 0.0)),
    ("balanced, out of phase   (f=1.00, alpha=180)", BiphotonPureState.from_degrees(1.0, 180.0)),
    ("balanced, partial phase  (f=1.00, alpha=60) ", BiphotonPureState.from_degrees(1.0, 60.0)),
    ("unbalanced               (f=1.73, alpha=0)  ", BiphotonPureState.from_degrees(1.73, 0.0)),
    ("separable +45 product                       ", ProductState()),
)


def main():
    for label, state in CASES:
        print(f"\n{label}")
        print("  theta_s    peak    shift    visibility")
        for entry in shift_table(state, SIGNAL_ANGLES, reference=0.0):
            vis = find_theta_max(state, entry.theta_s).visibility
            flag = "  (flat scan)" if entry.degenerate else ""
            print(
                f"  {entry.theta_s:7.1f}  {entry.theta_max:6.2f}  "
                f"{entry.shift:+7.2f}  {vis:10.4f}{flag}"
            )

    print(
        "\nA full +/-45 deg swing of the peak marks a maximally entangled pair;"
        "\nsmaller swings (here 30 deg at f=1.73) mean partial entanglement, and"
        "\nthe product state's peak never moves at all."
    )


if __name__ == "__main__":
    main()
