"""Entropy derivative integral against the finite-difference oracle.

For seeded random positive-definite states and Hermitian directions, prints
the worst relative gap per derivative order.
"""

import argparse
import math

import numpy as np

from qentropy.integral import entropy_derivative_fd, entropy_derivative_integral
from qentropy.linalg import random_density, random_hermitian


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--orders", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cases = []
    for k in range(args.pairs):
        n = 2 + k % (args.max_n - 1)
        cases.append((random_density(n, seed=rng), random_hermitian(n, rng)))
    for m in args.orders:
        gaps = []
        for rho, sigma in cases:
            v, _ = entropy_derivative_integral(rho, sigma, m)
            fd = -entropy_derivative_fd(rho, sigma, m) / math.factorial(m)
            gaps.append(abs(v - fd) / max(abs(v), 1e-300))
        gaps = np.array(gaps)
        print(f"m={m}: worst relative gap {gaps.max():.3e}, median {np.median(gaps):.3e}")


if __name__ == "__main__":
    main()
