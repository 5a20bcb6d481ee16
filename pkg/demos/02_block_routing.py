"""
Routing a permutation of blocks
===============================

Place N_L blocks of d_C^2 vertices, collapse them into a quotient graph and
route a random block permutation in two phases.
"""

import math

import numpy as np

from blockroute import (
    build_quotient,
    check_paths,
    check_schedule,
    generate_regular,
    place_blocks,
    regime_check,
    schedule_greedy,
    valiant_route,
)

d_c, n_l, d_prime, seed = 7, 32, 200, 3

g = generate_regular(2000, d_prime, seed)
blocks = place_blocks(g, n_l, d_c, guard=1, seed=seed)
blocks.audit(g)
q = build_quotient(g, blocks, seed=seed)
print(f"{n_l} blocks of {blocks.s}, occupancy {blocks.occupancy:.2f}")
print(f"quotient: avg weighted degree {q.avg_degree:.2f}, beta_Q {q.beta:.3f}, diameter {q.diameter}")

# is the host inside the high-connectivity regime?
host_beta = 2 * math.sqrt(d_prime - 1) / d_prime
verdict = regime_check(d_prime, d_c, 3, host_beta)
print(f"threshold d' > {verdict.loose_threshold:.1f}: {verdict.label}")

# pi needs its own stream: valiant_route draws sigma from default_rng(seed)
pi = np.random.default_rng([seed, 1]).permutation(n_l)
out = schedule_greedy(valiant_route(q, pi, seed, d_c))
check_paths(q, out)
check_schedule(q, out)

print(f"C_Q={out.congestion}  D_Q={out.dilation}  T_sched={out.t_sched}")
print(f"T_physical = d_C (C_Q + D_Q) = {out.t_physical}  vs  d_C log2 N_L = {d_c * math.log2(n_l):.0f}")

# the first few scheduled steps, as (block, from, to)
for t, step in enumerate(out.schedule[:3]):
    print(t, step[:4], "..." if len(step) > 4 else "")
