"""Tour of the quadratic family: one Arakelov-modular lattice per field.

Over Q(sqrt(d)) and Q(sqrt(-d)) alike, the trace-type classification emits a
single admissible level, d, and one witness pair (I, alpha = 1): I is the
whole ring of integers when the radical above 2 is not needed, and the
inverse radical above 2 otherwise.  Building the lattice and running the
definitional verification shows the familiar rank-2 Gram matrices:

    [[2, 1], [1, (d+1)/2]]   for odd d,
    [[2, 0], [0, d/2]]       for even d,

even exactly when d = 3 mod 4, minimum 2 except for the d = 2 lattice.
"""

from arakelov import build, classify, make_field, minimum, realize, verify_modularity


def main():
    header = f"{'field':>9} {'level':>5} {'ideal':>6} {'gram':>16} {'even':>5} {'min':>3}"
    print(header)
    print("-" * len(header))
    for d in (2, 3, 5, 6, 7, 10, 11, 13):
        for sign in "+-":
            field = make_field(f"quad:{sign}{d}")
            verdict = classify(field, trace_type=True)
            witness = verdict.witnesses[d]
            lat = build(field, realize(witness.ideal), witness.alpha)
            report = verify_modularity(lat, witness)  # raises if not d-modular
            assert report.modular_level == d
            gram = [[int(x) for x in row] for row in lat.gram]
            mu, _ = minimum(lat)
            ideal_text = witness.ideal.to_string() or "O_K"
            print(f"{field.spec_string():>9} {d:>5} {ideal_text:>6} "
                  f"{str(gram):>16} {str(lat.is_even()):>5} {mu:>3}")


if __name__ == "__main__":
    main()
