"""A quick pass over the benchmark registry.

Each row times one kernel workload and checks its result against an
independent oracle inside the timed body, then digests the printed
result so regressions show up as digest changes, not just timing
noise.  Sizes here are kept small; the registry defaults reproduce the
full desk-scale suite.
"""

from minicas import CSV_HEADER, bench_run, default_size, registered_ids


def main():
    print(CSV_HEADER)
    for test_id, n in [
        ("expand-subs-collapse", 30),
        ("gamma-series", 8),
        ("lw-a", 50),
        ("lw-b", 200),
        ("lw-c", 50),
        ("lw-h", 6),
        ("lw-i", 6),
        ("lw-j", 6),
        ("lw-p", 8),
        ("lw-q", 8),
    ]:
        print(bench_run(test_id, n).csv_line())

    print()
    print("registered rows and default sizes:")
    for test_id in sorted(registered_ids()):
        print(f"  {test_id:22s} n={default_size(test_id)}")


if __name__ == "__main__":
    main()
