import argparse

from pyinstrument import Profiler

from clutterforge.verify import Theorem, sweep


def main() -> None:
    parser = argparse.ArgumentParser(description="profile one exhaustive sweep")
    parser.add_argument("--q", type=int, default=3)
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--theorem", default="odd")
    parser.add_argument("--html", help="write an HTML report here")
    args = parser.parse_args()

    profiler = Profiler()
    with profiler:
        _, summary = sweep(args.q, args.n, Theorem.parse(args.theorem))
    print(summary)
    if args.html:
        profiler.write_html(args.html)
    else:
        profiler.print()


if __name__ == "__main__":
    main()
