"""Write the 10-question synthetic retrieval and reading corpora to a directory."""

import argparse
from pathlib import Path

from rewrite_probe.synthetic import (
    reading_args,
    retrieval_args,
    write_reading_corpus,
    write_retrieval_corpus,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path)
    parser.add_argument("--seed", type=int, default=13)
    args = parser.parse_args()
    retrieval = write_retrieval_corpus(args.out / "retrieval", seed=args.seed)
    reading = write_reading_corpus(args.out / "reading", seed=args.seed + 16)
    print("retrieval:", " ".join(retrieval_args(retrieval)))
    print("reading:  ", " ".join(reading_args(reading)))


if __name__ == "__main__":
    main()
