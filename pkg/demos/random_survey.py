"""Classify the seeded random corpus and cross-check it against minimal resolutions.

    python3 demos/random_survey.py [seed ...]
"""
import sys
from collections import Counter

from ntrans.algebra import graded_basis, minimal_resolution
from ntrans.corpus import random_corpus
from ntrans.koszul import classify_pq, koszul_spaces, predicted_betti
from ntrans.quiver import serialize

D = 6
seeds = [int(s) for s in sys.argv[1:]] or [0, 1, 2]
kinds = Counter()
for seed in seeds:
    for k, q in enumerate(random_corpus(seed)):
        gb = graded_basis(q, D)
        ks = koszul_spaces(gb, D)
        rep = classify_pq(gb, ks, D=D)
        if rep.failure:
            kind = "not Koszul"
        elif rep.p is None:
            kind = f"infinite within cap, Koszul up to {D}"
        elif rep.q is None:
            kind = f"p={rep.p}, Koszul up to {D}"
        else:
            kind = f"({rep.p},{rep.q})-Koszul"
        kinds[kind] += 1
        agree = True
        for i in q.vertices:
            hom = rep.homology[i]
            pos = sorted({s for (s, d, j) in hom if s >= 1})
            steps = pos[0] + 1 if pos else D
            res = minimal_resolution(gb, i, steps, D)
            for s, row in enumerate(predicted_betti(ks, hom, i, steps, D)):
                if row is not None and dict(res.counts(s)) != row:
                    agree = False
        print(f"seed {seed} #{k}: {len(q.vertices)} vertices, {len(q.arrows)} arrows, "
              f"{len(q.relations)} relations -> {kind}; resolution agrees: {agree}")
        if rep.failure:
            print("   " + serialize(q).replace("\n", "\n   ").rstrip())
print()
for kind, count in kinds.most_common():
    print(f"{count:3d}  {kind}")
