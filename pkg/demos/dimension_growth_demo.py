#!/usr/bin/env python3
"""Isotypic dimensions against the locus-quadrature growth coefficient.

For each catalog model the exact multiplicity count dim H^mu_{k nu} is
compared with (k/pi)^{d+1-r} delta_0, where delta_0 integrates the
leading coefficient over the moment-map locus.  The torus models have
independent closed forms (pi/2 and pi^2/12); the group models come out
exactly pi.
"""

import numpy as np

from coorbit import MODEL_IDS, build_model, dimension_coefficient, isotypic_dim


def main():
    for mid in MODEL_IDS:
        model = build_model(mid)
        nu = model.default_nu
        delta0 = dimension_coefficient(model, nu)
        power = model.d + 1 - model.group.rank
        print(f"\n{mid}: delta0 = {delta0:.12f}  growth (k/pi)^{power}")
        for k in (32, 128, 512):
            k = model.valid_k(k)
            dim = isotypic_dim(model, nu, k)
            pred = (k / np.pi) ** power * delta0
            print(f"  k={k:4d}: count={dim:6d}  predicted={pred:12.3f}"
                  f"  rel err={abs(dim - pred) / pred:.2e}")


if __name__ == "__main__":
    main()
