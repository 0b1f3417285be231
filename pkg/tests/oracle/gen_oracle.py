"""Regenerate frozen.json with sympy, independently of the package under test.

Run from the repository root:  python3 tests/oracle/gen_oracle.py
"""

import json
from itertools import combinations
from pathlib import Path

import sympy as sp


def s(expr):
    return str(sp.expand(expr)).replace("**", "^")


x, y, z, w, a1, a2, a3, t = sp.symbols("x y z w a1 a2 a3 t")
out = {}

out["d_dw"] = s(sp.diff(y**2 * z + y * w**2 + z**2, w))
out["eval_x_a3y"] = str((x - a3 * y).subs({x: 6, y: 2, a3: 3}))

G = sp.groebner([x - a3 * y, z - a1 * w], x, z, y, w, a1, a3, order="lex")
out["gb_lex_coprime"] = sorted(s(g) for g in G.exprs)

G = sp.groebner([y * w, y**3 - a3 * w, w**3 - a1 * y], y, w, a1, a3, order="grevlex")
out["y4_member"] = G.contains(y**4)

G = sp.groebner([t * y - 1, y * w], t, y, w, order="lex")
out["elim_t"] = sorted(s(g) for g in G.exprs if not g.has(t))

F1 = sp.Matrix([[w**3, y, x], [z, w, y**3]])
out["minors_F1"] = sorted(s(F1.extract([0, 1], list(c)).det()) for c in combinations(range(3), 2))
out["rank_F1_0010"] = F1.subs({x: 0, y: 0, z: 1, w: 0}).rank()

g, h, f = sp.symbols("g h f")
out["schur_1x1"] = s(sp.Matrix([[1, g], [h, f]]).det())

# (2,3,2) example, chart {2}: generators, then eliminate x, z and saturate by y*w
gens = [w**3 - a1 * y, x - a3 * y, z - a1 * w, y**3 - a3 * w]
rest = [sp.expand(q.subs({x: a3 * y, z: a1 * w})) for q in gens]
rest = [q for q in rest if q != 0]
G = sp.groebner(rest + [t * y * w - 1], t, y, w, a1, a3, order="lex")
sat = [g_ for g_ in G.exprs if not g_.has(t)]
out["ex41_saturated"] = sorted(s(q) for q in sp.groebner(sat, y, w, a1, a3, order="grevlex").exprs)
target = sp.Matrix([[w**2, y, a3], [a1, w, y**2]])
tmin = [target.extract([0, 1], list(c)).det() for c in combinations(range(3), 2)]
out["ex41_target_gb"] = sorted(s(q) for q in sp.groebner(tmin, y, w, a1, a3, order="grevlex").exprs)


def chart_gens(M, I, avar):
    # t = 2: column i (i != I) minus a * column I
    cols = [j for j in range(M.cols) if j != I]
    return [sp.expand(M[r, j] - avar[j] * M[r, I]) for j in cols for r in range(M.rows)]


# E7 steps: eliminated hypersurfaces by solving the linear generator by hand
steps = {
    1: (sp.Matrix([[y, x**2 + z**3], [-x, y]])),
    2: (sp.Matrix([[x, z**2], [-z, x + w**2]])),
    3: (sp.Matrix([[y, z], [-z, y * z + w**2]])),
    4: (sp.Matrix([[x * y, w], [-w, x + y]])),
    5: (sp.Matrix([[x, z * (x + y)], [-z, y]])),
    6: (sp.Matrix([[z, x], [w, x - w * z]])),
    7: (sp.Matrix([[y, w], [z, z + w]])),
}
out["e7_dets"] = {k: s(M.det()) for k, M in steps.items()}
elim = {}
for k, M in steps.items():
    for I, a in ((0, a2), (1, a1)):
        gens = chart_gens(M, I, {0: a1, 1: a2})
        # solve one generator for an ambient variable with constant coefficient
        done = None
        for v in (x, y, z, w):
            for q in gens:
                p = sp.Poly(q, v)
                if p.degree() == 1 and p.coeff_monomial(v).is_number:
                    sol = sp.solve(q, v)[0]
                    others = [sp.expand(r.subs(v, sol)) for r in gens if r is not q]
                    done = (str(v), [s(r) for r in others if r != 0])
                    break
            if done:
                break
        elim[f"{k}.{I + 1}"] = done
out["e7_eliminated"] = elim

# A4 with l = 2
A4 = sp.Matrix([[x, z**2], [z**3, y]])
out["a4_chart1"] = s((z**2 - a2 * x))
out["a4_chart2"] = s((z**3 - a1 * y))
out["a4_det"] = s(A4.det())

# non-normal example, chart {1}
M = sp.Matrix([[z, x**2 + y**3], [x**2 + y**5, z]])
g1, g2 = chart_gens(M, 0, {1: a2})
zsol = sp.solve(g2, z)[0]
nn = sp.expand(g1.subs(z, zsol))
out["nonnormal_chart1"] = s(nn)
J = [nn] + [sp.diff(nn, v) for v in (x, y, a2)]
out["nonnormal_axis_in_J"] = all(q.subs({x: 0, y: 0, a2: c}) == 0 for q in J for c in (1, 2, -3))

# model-lab
A0 = sp.zeros(2, 3)
Ap = sp.Matrix([[1, 0, 0], [0, 0, 0]])
out["nash_a0_ranks"] = [(A0 + Ap / i).rank() for i in range(1, 5)]
out["tangent_222"] = bool(all(
    sp.Matrix.hstack(sp.Matrix([[1], [0]]), (sp.Matrix([[0, 0], [0, 1]]) * v)).rank() == 1
    for v in sp.Matrix([[1, 0], [0, 0]]).nullspace()))


def witness_spaces(m, n, tt):
    def member(which, sv):
        A = sp.zeros(m, n)
        for i in range(tt - 2):
            A[i, i] = 1
        A[tt - 2 if which == 1 else tt - 1, tt - 2] = sp.Rational(1, sv)
        return A
    res = []
    for which in (1, 2):
        A = member(which, 2)
        cols = A.columnspace()
        res.append(sorted(tuple(int(c) for c in v) for v in sp.Matrix.hstack(*cols).T.rref()[0].tolist()
                          if any(v)))
    return res


out["witness_333"] = witness_spaces(3, 3, 2)
out["witness_443"] = witness_spaces(4, 4, 3)

Path(__file__).with_name("frozen.json").write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")
