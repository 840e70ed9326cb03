"""Walk through the retrieval scheme at N=3 servers, K=2 messages.

Prints the full query/answer table for each requested message: the top
rows are the single-server direct-download pattern (probability class
p'0), the rest the vector-key base code grouped by interference weight.
"""

from wpir import SystemParams
from wpir.tables import format_table

params = SystemParams(num_servers=3, num_messages=2)

for k in (1, 2):
    print(f"Retrieval of message {k}")
    print(format_table(params, k))
    print()

# Messages have L = N - 1 = 2 symbols; a zero digit in a vector query
# addresses the dummy symbol and contributes nothing to the answer, so the
# all-zero query needs no reply at all. That is what makes the direct keys
# blend in: every server not asked for the full message sees the same
# all-zero query the base code already uses.
