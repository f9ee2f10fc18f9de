#!/usr/bin/env python3
"""Transport duals with mismatched support sizes.

Finds a 2-atom equal-weight transport dual for a 3-atom frame and prints the
realizing coupling, then shows the zero-centroid obstruction: an equiangular
tight frame in the plane admits no equal-weight dual on two points, and every
attempt comes back with an infeasibility certificate.
"""

import argparse

import numpy as np

from pframes import DiscreteMeasure, find_transport_dual, zero_centroid_obstruction
from pframes.duality import FarkasCertificate, TransportPlan, cross_moment_matrix


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=5)
    args = parser.parse_args()

    s3 = np.sqrt(3.0)
    mu = DiscreteMeasure(
        atoms=[[1.0, 0.0], [s3 / 2.0, 0.5], [0.0, 1.0]],
        weights=[0.5, 1.0 / 6.0, 1.0 / 3.0],
    )
    den = 4.0 - s3
    nu = DiscreteMeasure(
        atoms=[[18.0 / den, -6.0 * (2.0 + s3) / den], [-12.0 / den, 24.0 / den]],
        weights=[0.5, 0.5],
    )
    result = find_transport_dual(mu, nu)
    assert isinstance(result, TransportPlan)
    print("3-atom frame vs 2-atom candidate: FEASIBLE")
    print("coupling:")
    print(np.array_str(result.coupling, precision=6))
    print("cross moment (should be identity):")
    print(np.array_str(cross_moment_matrix(result), precision=10))

    mb = DiscreteMeasure(
        atoms=[[0.0, 1.0], [-s3 / 2.0, -0.5], [s3 / 2.0, -0.5]],
        weights=np.full(3, 1.0 / 3.0),
    )
    print(f"\nMercedes-Benz frame zero-centroid: {zero_centroid_obstruction(mb)}")
    rng = np.random.default_rng(args.seed)
    for trial in range(args.trials):
        candidate = DiscreteMeasure(atoms=rng.normal(size=(2, 2)), weights=[0.5, 0.5])
        result = find_transport_dual(mb, candidate)
        assert isinstance(result, FarkasCertificate)
        combined = float(
            np.trace(result.B) + result.u @ mb.weights + result.v @ candidate.weights
        )
        print(f"trial {trial}: infeasible, certificate margin {combined:.3e}")


if __name__ == "__main__":
    main()
