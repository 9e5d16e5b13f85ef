"""Two unimodular stories: Z^6 over realcyclo:13 and an odd extremal
unimodular lattice in dimension 21 over realcyclo:49.

The Z^6 story is a resolution of an ambiguity.  Write gamma for the totally
positive radical generator 2 - 2cos(2pi/13).  Two pairings both produce
verified level-1 lattices isometric to Z^6 (determinant 1, minimum 1,
twelve vectors of norm 1):

    (I, alpha) = (P13^-3, gamma)        and        (P13^-2, gamma^-1).

What fails is the cross-pairing P13^-3 with alpha = gamma^-1 -- exactly the
combination a reader gets by taking the displayed ideal together with the
displayed form of the general construction.  Its witness violates the
module identity (clause ii), and the witness constructor rejects it
outright.  The classification records the self-consistent (P13^-2,
gamma^-1) variant.

The second story: over realcyclo:49 the odd-degree rule gives a level-1
witness I = P7^-19, alpha = 1, whose lattice is integral, determinant 1,
dimension 21, with exact minimum 2 -- an odd unimodular lattice meeting
the extremal bound in its dimension.
"""

from arakelov import (
    ConstructionWitness,
    IdealRecipe,
    InternalInconsistency,
    build,
    classify,
    gamma_element,
    make_field,
    minimum,
    realize,
    theta_prefix,
    verify_modularity,
)


def z6_story():
    field = make_field("realcyclo:13")
    gamma = gamma_element(field, 13)
    print("over realcyclo:13 (degree 6), gamma = 2 - 2cos(2pi/13):")
    for text, alpha, label in (
        ("P13^-3", gamma, "gamma"),
        ("P13^-2", gamma.inverse(), "gamma^-1"),
    ):
        recipe = IdealRecipe.parse(field, text)
        witness = ConstructionWitness(1, field.one(), alpha, recipe)
        lat = build(field, realize(recipe), alpha)
        verify_modularity(lat, witness)
        mu, _ = minimum(lat)
        norm_one = dict(theta_prefix(lat, 1)).get(1, 0)
        print(f"  ({text}, {label}): verified level 1, det {lat.determinant()}, "
              f"min {mu}, {norm_one} vectors of norm 1  -> Z^6")
    try:
        ConstructionWitness(1, field.one(), gamma.inverse(),
                            IdealRecipe.parse(field, "P13^-3"))
        raise SystemExit("the cross-pairing should have been rejected")
    except InternalInconsistency as exc:
        print(f"  (P13^-3, gamma^-1): rejected -- {exc}")
    recorded = classify(field, trace_type=False).witnesses[1]
    print(f"  classification records: ({recorded.ideal.to_string()}, gamma^-1)")


def dim21_story():
    field = make_field("realcyclo:49")
    witness = classify(field, trace_type=True).witnesses[1]
    lat = build(field, realize(witness.ideal), witness.alpha)
    verify_modularity(lat, witness)
    mu, kissing = minimum(lat)
    print(f"\nover realcyclo:49 (degree 21): I = {witness.ideal.to_string()}, "
          f"alpha = 1")
    print(f"  integral: {lat.is_integral()}, det {lat.determinant()}, "
          f"even: {lat.is_even()}, min {mu} (kissing {kissing})")


def main():
    z6_story()
    dim21_story()


if __name__ == "__main__":
    main()
