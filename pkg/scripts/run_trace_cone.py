#!/usr/bin/env python3
"""Sample the componentwise-trace images of the two order-2 cone generator
families and summarize the attained regions.

Prints, per system: the range of the first trace, the largest imaginary part
of the second trace, and the fraction of samples passing the
positive-definiteness certificate.  Ends with the standing discrepancy note.
"""

import argparse

from cstardyn.cyclic_examples import omega_system, sigma_system
from cstardyn.multiplier import TRACE_CONE_NOTE, trace_image_sample


def summarize(name: str, samples) -> None:
    tr0 = [s.trace0.real for s in samples]
    im1 = [abs(s.trace1.imag) for s in samples]
    re1 = [s.trace1.real for s in samples]
    pd = sum(s.positive_definite for s in samples) / len(samples)
    print(f"{name}:")
    print(f"  samples            {len(samples)}")
    print(f"  tr T_0 range       [{min(tr0):.4f}, {max(tr0):.4f}]")
    print(f"  tr T_1 real range  [{min(re1):.4f}, {max(re1):.4f}]")
    print(f"  max |Im tr T_1|    {max(im1):.4f}")
    print(f"  certificate rate   {pd:.3f}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    summarize("trivial action (omega_2)", trace_image_sample(omega_system(2), args.count, args.seed))
    summarize("shift action (sigma_2)", trace_image_sample(sigma_system(2), args.count, args.seed))
    print()
    print(TRACE_CONE_NOTE)


if __name__ == "__main__":
    main()
