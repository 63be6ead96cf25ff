#!/usr/bin/env python3
"""Generate the bundled table of nontrivial Riemann zeta zero ordinates.

Writes a plain-text file in the eigenvalue/zeros grammar used by the
package loader: `# key: value` headers followed by one ascending ordinate
per line.  Run once; the output is committed as package data.
"""

from __future__ import annotations

import argparse
import time

import mpmath as mp


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--dps", type=int, default=25)
    ap.add_argument("--digits", type=int, default=13)
    ap.add_argument("--out", default="src/selberg_lab/data/riemann_zeros.txt")
    args = ap.parse_args()

    mp.mp.dps = args.dps
    ordinates = []
    t0 = time.time()
    for n in range(1, args.count + 1):
        z = mp.zetazero(n)
        ordinates.append(mp.nstr(z.imag, args.digits, strip_zeros=False))
        if n % 50 == 0:
            print(f"  {n}/{args.count} zeros ({time.time() - t0:.0f}s)", flush=True)

    last = float(mp.mpf(ordinates[-1]))
    with open(args.out, "w") as fh:
        fh.write("# source: computed with mpmath.zetazero (Riemann-Siegel + Turing method)\n")
        fh.write("# generator: tools/gen_riemann_zeros.py\n")
        fh.write(f"# count: {args.count}\n")
        fh.write(f"# complete_below: {last:.6f}\n")
        for s in ordinates:
            fh.write(s + "\n")
    print(f"wrote {args.out} ({args.count} ordinates, last = {last:.6f})")


if __name__ == "__main__":
    main()
