"""
One block hop as physical matchings
===================================

A quotient step moves every atom of a block to a fresh footprint. The moves
are split into rounds in which each host edge carries one atom.
"""

from blockroute import (
    build_quotient,
    check_matchings,
    decompose_hop_into_matchings,
    generate_regular,
    place_blocks,
    plan_block_hop,
)
from blockroute.routing import sample_hop_target

d_c = 5
g = generate_regular(2000, 100, seed=4)
blocks = place_blocks(g, 16, d_c, guard=1, seed=4)
q = build_quotient(g, blocks, seed=4)

for block in range(4):
    toward = q.neighbor_lists()[block][0]
    target = sample_hop_target(g, blocks, block, toward)
    plan = decompose_hop_into_matchings(plan_block_hop(g, blocks, block, target))
    check_matchings(plan)
    print(f"block {block} -> near {toward}: congestion {plan.congestion}, "
          f"dilation {plan.dilation}, rounds {plan.rounds} (d_C = {d_c})")
