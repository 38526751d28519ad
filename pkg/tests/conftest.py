import numpy as np
import pytest
from hypothesis import settings, strategies as st

from kgrec.embeddings import EmbeddingSpace
from kgrec.graph import IRI, Literal, Triple, XSD_DECIMAL

settings.register_profile("ci", deadline=None, max_examples=100)
settings.load_profile("ci")

EX = "http://ex.org/"

local = st.text(alphabet="abcdefghijklmnopqrstuvwxyzABC0123456789_-", min_size=1, max_size=8)
iris = local.map(lambda s: IRI(EX + s))
plain_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), min_codepoint=1, max_codepoint=0x2FFF),
    max_size=12,
)
literals = st.one_of(
    plain_text.map(Literal),
    st.integers(-10**9, 10**9).map(Literal),
    st.decimals(allow_nan=False, allow_infinity=False, places=3, min_value=-1000, max_value=1000).map(
        lambda d: Literal(str(d), XSD_DECIMAL)
    ),
)
objects = st.one_of(iris, literals)
triples = st.builds(Triple, iris, iris, objects)


def random_corpus(n, seed=0):
    """``n`` distinct triples mixing IRIs, escaped strings and typed numbers."""
    rng = np.random.default_rng(seed)
    specials = ["tab\t", 'quote"', "back\\slash", "new\nline", "unié中", "cr\r", " lead", ""]
    out = set()
    while len(out) < n:
        s = IRI(f"{EX}s{rng.integers(200)}")
        p = IRI(f"{EX}p{rng.integers(12)}")
        kind = rng.integers(4)
        if kind == 0:
            o = IRI(f"{EX}o{rng.integers(500)}")
        elif kind == 1:
            o = Literal(f"{specials[rng.integers(len(specials))]}{rng.integers(1000)}")
        elif kind == 2:
            o = Literal(int(rng.integers(-10**6, 10**6)))
        else:
            o = Literal(f"{rng.normal():.4f}", XSD_DECIMAL)
        out.add(Triple(s, p, o))
    return sorted(out, key=lambda t: t.n3())


def random_spaces(users, items, n_rel=6, dim=8, seed=0):
    rng = np.random.default_rng(seed)
    entities = list(users) + list(items)
    return [
        EmbeddingSpace(f"{EX}rel{r}", entities, rng.normal(size=(len(entities), dim)))
        for r in range(n_rel)
    ]


@pytest.fixture
def corpus_1000():
    return random_corpus(1000, seed=7)


def two_clique_graph():
    """Two 5-cliques joined by one bridge edge, as a single-relation graph."""
    from kgrec.graph import KnowledgeGraph

    rel = IRI(EX + "linked")
    a = [IRI(f"{EX}a{i}") for i in range(5)]
    b = [IRI(f"{EX}b{i}") for i in range(5)]
    edges = [(x, y) for grp in (a, b) for i, x in enumerate(grp) for y in grp[i + 1:]]
    edges.append((a[0], b[0]))
    return KnowledgeGraph(Triple(x, rel, y) for x, y in edges), a, b


def clique_gap(space, a, b):
    import itertools

    from kgrec.embeddings import cosine_similarity

    intra = [cosine_similarity(space[x], space[y]) for grp in (a, b) for x, y in itertools.combinations(grp, 2)]
    inter = [cosine_similarity(space[x], space[y]) for x in a for y in b]
    return float(np.mean(intra) - np.mean(inter))


def fd_gradient_check(steps=100, seed=0, h=1e-5):
    """Worst relative error of the analytic skip-gram gradient against central differences."""
    from kgrec.embeddings import sgns_gradients, sgns_objective

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(steps):
        n, d, k = int(rng.integers(3, 9)), int(rng.integers(2, 7)), int(rng.integers(1, 6))
        w_in = rng.normal(scale=0.8, size=(n, d))
        w_out = rng.normal(scale=0.8, size=(n, d))
        center, context = rng.integers(n), rng.integers(n)
        negs = rng.integers(0, n, size=k)
        g_in, g_out = sgns_gradients(w_in, w_out, center, context, negs)
        for mat, grad in ((w_in, g_in), (w_out, g_out)):
            num = np.zeros_like(mat)
            for idx in np.ndindex(*mat.shape):
                old = mat[idx]
                mat[idx] = old + h
                up = sgns_objective(w_in, w_out, center, context, negs)
                mat[idx] = old - h
                down = sgns_objective(w_in, w_out, center, context, negs)
                mat[idx] = old
                num[idx] = (up - down) / (2 * h)
            both_zero = (grad == 0) & (np.abs(num) < 1e-12)
            denom = np.maximum(np.abs(grad), np.abs(num))
            rel = np.where(both_zero, 0.0, np.abs(grad - num) / np.where(denom == 0, 1.0, denom))
            worst = max(worst, float(rel.max()))
    return worst


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
