"""Print the shipped breakdown tables and their rewriting-impact fractions."""

import argparse

from rewrite_probe.breakdown import rewriting_impact_fraction
from rewrite_probe.published import RULES, load_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", default=sorted(RULES, reverse=True))
    args = parser.parse_args()
    for name in args.names:
        table = load_table(name)
        table.check_partition()
        print(f"## {name}\n")
        print(table.to_markdown())
        print("| scope | " + " | ".join(table.rules) + " |")
        print("|---|" + "---|" * len(table.rules))
        for scope in ("all", "human_differs"):
            cells = [f"{rewriting_impact_fraction(table.column(r), scope):.2f}" for r in table.rules]
            print(f"| {scope} | " + " | ".join(cells) + " |")
        print()


if __name__ == "__main__":
    main()
