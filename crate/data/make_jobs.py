"""Writes the job files in data/jobs/.

Each group acts by conjugation on chosen classes of its involutions, with
tau(x) = conjugation by x. Run from the repository root.
"""

from itertools import product


def compose(p, q):
    """p then q."""
    return tuple(q[i] for i in p)


def inverse(p):
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def cycles(n, *cs):
    img = list(range(n))
    for c in cs:
        for k in range(len(c)):
            img[c[k]] = c[(k + 1) % len(c)]
    return tuple(img)


def closure(gens):
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    todo = [ident]
    while todo:
        h = todo.pop()
        for g in gens:
            k = compose(h, g)
            if k not in seen:
                seen.add(k)
                todo.append(k)
    return seen


def conj(x, g):
    return compose(compose(inverse(g), x), g)


def classes_of_involutions(elements):
    invs = sorted(e for e in elements if e != tuple(range(len(e))) and compose(e, e) == tuple(range(len(e))))
    out = []
    done = set()
    for x in invs:
        if x in done:
            continue
        cl = sorted({conj(x, g) for g in elements})
        done.update(cl)
        out.append(cl)
    return out


def fmt(p):
    return "[" + ",".join(str(x) for x in p) + "]"


def write_job(path, title, gens, classes, order, fixed=0):
    """`fixed` extra points come first; G fixes them and their tau is trivial."""
    points = [x for cl in classes for x in cl]
    index = {x: fixed + i for i, x in enumerate(points)}
    act = lambda g: tuple(range(fixed)) + tuple(index[conj(x, g)] for x in points)
    lines = [f"# {title}", f"# group order {order}"]
    lines.append("name " + title.split()[0])
    lines.append("axes " + "+".join(["1"] * fixed + [str(len(c)) for c in classes]))
    lines.append("law monster")
    for g in gens:
        lines.append("gen " + fmt(act(g)))
    lines.append("tau")
    for _ in range(fixed):
        lines.append(fmt(tuple(range(fixed + len(points)))))
    for x in points:
        lines.append(fmt(act(x)))
    lines.append("end")
    lines.append("shape enumerate")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def by_size(cls, *sizes, pick=None):
    """Classes with the given sizes, in the given order."""
    out = []
    pool = list(cls)
    for s in sizes:
        c = next(c for c in pool if len(c) == s)
        pool.remove(c)
        out.append(c)
    return out


def gl32():
    vecs = [v for v in product([0, 1], repeat=3) if any(v)]
    idx = {v: i for i, v in enumerate(vecs)}

    def mat(m):
        return tuple(idx[tuple(sum(v[j] * m[j][i] for j in range(3)) % 2 for i in range(3))] for v in vecs)

    return [mat(((1, 1, 0), (0, 1, 0), (0, 0, 1))), mat(((0, 1, 0), (0, 0, 1), (1, 0, 0))), mat(((1, 0, 0), (0, 1, 1), (0, 0, 1)))]


def psl2(p):
    pts = list(range(p)) + ["inf"]
    idx = {x: i for i, x in enumerate(pts)}

    def mob(a, b, c, d):
        img = []
        for z in pts:
            if z == "inf":
                w = "inf" if c == 0 else a * pow(c, -1, p) % p
            else:
                den = (c * z + d) % p
                w = "inf" if den == 0 else (a * z + b) * pow(den, -1, p) % p
            img.append(idx[w])
        return tuple(img)

    return [mob(1, 1, 0, 1), mob(0, p - 1, 1, 0)]


def main():
    jobs = []
    s4 = [cycles(4, (0, 1)), cycles(4, (0, 1, 2, 3))]
    s3s3 = [cycles(6, (0, 1)), cycles(6, (0, 1, 2)), cycles(6, (3, 4)), cycles(6, (3, 4, 5))]
    a5 = [cycles(5, (0, 1, 2, 3, 4)), cycles(5, (0, 1, 2))]
    s5 = [cycles(5, (0, 1)), cycles(5, (0, 1, 2, 3, 4))]
    a6 = [cycles(6, (0, 1, 2)), cycles(6, (1, 2, 3, 4, 5))]
    s6 = [cycles(6, (0, 1)), cycles(6, (0, 1, 2, 3, 4, 5))]
    l32 = gl32()
    l211 = psl2(11)

    def add(fname, title, gens, pick, fixed=0):
        el = closure(gens)
        cls = classes_of_involutions(el)
        jobs.append((fname, title, gens, pick(cls), len(el), fixed))

    add("s4_6", "S4 on 6 transpositions", s4, lambda c: by_size(c, 6))
    add("s4_1+3+6", "S4 on a fixed axis, 3 double transpositions and 6 transpositions", s4, lambda c: by_size(c, 3, 6), fixed=1)
    add("s4_6+3", "S4 on 6 transpositions and 3 double transpositions", s4, lambda c: by_size(c, 6, 3))
    add("s3xs3_3+3", "S3xS3 on the transpositions of each factor", s3s3, lambda c: by_size(c, 3, 3))
    add("s3xs3_3+9", "S3xS3 on one factor's transpositions and the 9 products", s3s3, lambda c: [c[0], next(x for x in c if len(x) == 9)])
    add("s3xs3_3+3+9", "S3xS3 on all 15 involutions", s3s3, lambda c: by_size(c, 3, 3, 9))
    add("a5_15", "A5 on its 15 involutions", a5, lambda c: by_size(c, 15))
    add("s5_10", "S5 on 10 transpositions", s5, lambda c: by_size(c, 10))
    add("s5_10+15", "S5 on 10 transpositions and 15 double transpositions", s5, lambda c: by_size(c, 10, 15))
    add("l3_2_21", "L3(2) on its 21 involutions", l32, lambda c: by_size(c, 21))
    add("a6_45", "A6 on its 45 involutions", a6, lambda c: by_size(c, 45))
    add("s6_15", "S6 on 15 transpositions", s6, lambda c: [x for x in c if len(x) == 15 and x[0] == cycles(6, (0, 1))] or by_size(c, 15))
    transp = lambda c: next(x for x in c if len(x) == 15 and cycles(6, (0, 1)) in x)
    triple = lambda c: next(x for x in c if len(x) == 15 and cycles(6, (0, 1)) not in x)
    add("s6_15+45", "S6 on 15 transpositions and 45 double transpositions", s6, lambda c: [transp(c), next(x for x in c if len(x) == 45)])
    add("s6_15+15+45", "S6 on transpositions, triple transpositions and double transpositions", s6, lambda c: [transp(c), triple(c), next(x for x in c if len(x) == 45)])
    add("l2_11_55", "L2(11) on its 55 involutions", l211, lambda c: by_size(c, 55))
    for fname, title, gens, classes, order, fixed in jobs:
        write_job(f"data/jobs/{fname}.job", title, gens, classes, order, fixed)


if __name__ == "__main__":
    main()
