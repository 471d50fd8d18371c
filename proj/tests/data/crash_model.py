import sys

# answers the first N lines (default 3), then dies with status 7
limit = int(sys.argv[1]) if len(sys.argv) > 1 else 3
for i, line in enumerate(sys.stdin):
    if i == limit:
        sys.exit(7)
    sys.stdout.write("0\n")
    sys.stdout.flush()
