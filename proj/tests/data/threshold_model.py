import sys

# label 1 iff the second feature exceeds 0.5
for line in sys.stdin:
    fields = line.rstrip("\n").split(",")
    sys.stdout.write("1\n" if float(fields[1]) > 0.5 else "0\n")
    sys.stdout.flush()
