"""Walk the A4 chain with rad² = 0 through every construction.

    python3 demos/a4_pipeline.py
"""
from ntrans.algebra import graded_basis
from ntrans.constructions import Window, smash_extension, trivial_extension
from ntrans.corpus import named
from ntrans.dual import koszul_dual_quiver
from ntrans.hammock import almost_split_report, partial_as_regular, slice_truncation
from ntrans.koszul import classify_pq
from ntrans.quiver import serialize
from ntrans.translation import check_admissible, infer_translation


def banner(title):
    print(f"\n== {title}")


q = named("a4rad2")
gb = graded_basis(q, 6)
ts = infer_translation(gb, 0)
banner("0-translation structure")
print("tau:", ts.tau, " P:", ts.P, " I:", ts.I)
print("admissible:", check_admissible(gb, ts)["pass"])

banner("trivial extension")
tilde = trivial_extension(q, gb, ts)
print(serialize(tilde), end="")
rep = classify_pq(graded_basis(tilde, 10), D=10)
print(f"(p, q) = ({rep.p}, {rep.q})")
print(rep.format_table(tilde.vertices))

banner("its Koszul dual")
e = koszul_dual_quiver(tilde)
eg = graded_basis(e, 8)
print("dims by degree:", [eg.dim_degree(t) for t in range(5)])
drep = classify_pq(eg, D=8)
print(f"(p, q) = ({drep.p}, {drep.q})")

banner("window of the Z-cover, layers 1..4, and its slice truncation")
z = smash_extension(q, gb, ts, Window(0, 1, 4))
zgb = graded_basis(z, 8)
q2 = slice_truncation(z, zgb, None, [f"{k}@1" for k in q.vertices])
print(f"window: {len(z.vertices)} vertices, {len(z.arrows)} arrows")
print(f"truncation: {len(q2.vertices)} vertices: {' '.join(q2.vertices)}")

banner("almost split sequences in the duals")
for label, bq in (("tilde", tilde), ("Q(2)", q2)):
    g = graded_basis(bq, 8)
    t = infer_translation(g, 1)
    kr = classify_pq(g, D=8, n=1)
    print(f"-- {label}")
    print(almost_split_report(bq, g, t, kr).format_text())
    v = partial_as_regular(bq, g, t, kr)
    print("partial AS-regular:", v["is_partial_AS_n_regular"], " parameter:", v.get("gorenstein_parameter"),
          " oracle agrees:", v.get("oracle_agrees"))
