"""Show how the two algebroid definitions separate on the twisted line.

Builds the differential family of the variant-A twisted line, runs both
sets of linearity conditions on it, then converts to variant B and reruns.
"""
from homalgebroid.algebroid import algebroid_to_json
from homalgebroid.config import RunConfig
from homalgebroid.equivalence import build_family, check_theorem_conditions, convert
from homalgebroid.fixtures import twisted_line


def show(title, rep):
    print(f"== {title}")
    for item in rep.items:
        mark = "PASS" if item.passed else "FAIL"
        print(f"  [{mark}] {item.name}: {item.detail}")
        if not item.passed and item.witness:
            print(f"         witness {item.witness}")


def main():
    cfg = RunConfig()
    ab = twisted_line()
    fam = build_family(ab, cfg)
    show("A data, A conditions", check_theorem_conditions(fam, "A", cfg))
    show("A data, B conditions", check_theorem_conditions(fam, "B", cfg))
    b, _ = convert(ab, "B", cfg)
    print("converted:", algebroid_to_json(b))
    show("converted data, B conditions", check_theorem_conditions(build_family(b, cfg), "B", cfg))


if __name__ == "__main__":
    main()
