"""Instruction encodings shared by the compiled and pure-Python kernels.

The Cython backend mirrors these values as C enums; the parity tests in
``tests/test_kernels.py`` keep the two in lock-step.
"""

# derivation outcome
DERIVE_VALID = 0
DERIVE_INVALID = 1
DERIVE_RUNAWAY = 2

# ant bytecode: MOVE/LEFT/RIGHT are 1-step actions, IF_FOOD jumps to its
# operand when no food is ahead, JUMP is unconditional.
ANT_MOVE = 0
ANT_LEFT = 1
ANT_RIGHT = 2
ANT_IF_FOOD = 3
ANT_JUMP = 4

# arithmetic postfix ops over a float stack
EXPR_PUSH_X = 0
EXPR_ADD = 1
EXPR_SUB = 2
EXPR_MUL = 3
EXPR_PDIV = 4

# denominators with |b| <= PDIV_EPS divide to PDIV_FALLBACK instead
PDIV_EPS = 1e-12
PDIV_FALLBACK = 1.0

# boolean postfix ops over a 0/1 stack
BOOL_PUSH_X1 = 0
BOOL_PUSH_X2 = 1
BOOL_PUSH_X3 = 2
BOOL_AND = 3
BOOL_OR = 4
BOOL_NAND = 5
BOOL_NOR = 6
BOOL_NOT = 7
