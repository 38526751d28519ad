"""
Explaining one user-item match
==============================

A single customer and a single electric car, scored feature by feature.
Numeric preferences use the min/max ratio, equal objects match fully, and
the global score is the plain mean.
"""

from kgrec.explainer import WordVectorProvider, explain, render_report
from kgrec.graph import Triple, infer_closure
from kgrec.schema import ECO_FRIENDLY, TYPE
from kgrec.synthetic import FIXTURE_ITEM, FIXTURE_USER, explanation_fixture

g = explanation_fixture()
print(len(g), "triples")

# %%
# The car is only typed as an electric car.  Forward chaining over the
# class hierarchy adds the broader classes.
closed = infer_closure(g)
for t in sorted(closed.inferred, key=lambda t: t.n3()):
    if t.subject == FIXTURE_ITEM:
        print("inferred:", t.object.local_name)
print("eco-friendly:", closed.is_inferred(Triple(FIXTURE_ITEM, TYPE, ECO_FRIENDLY)))

# %%
# Without word vectors, categorical values only match when equal.
report = explain(g, FIXTURE_USER, FIXTURE_ITEM, WordVectorProvider({}))
for m in report.matches:
    print(f"{m.feature:16s} {m.score:.4f}  ({m.method})")

# %%
# Three renderings of the same report.
print(render_report(report, "table"))
print(render_report(report, "text"))

svg = render_report(report, "radar")
with open("explanation.svg", "w") as fh:
    fh.write(svg)
print("radar chart written to explanation.svg")
