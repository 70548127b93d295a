# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluator for programs whose values all fit in int64.

Runs the same node pool as the Python backend (see program.py): a
recursive interpreter over flat arrays, slots and constants held in
int64 buffers.
"""

from libc.stdlib cimport malloc, free

ctypedef long long i64

cdef enum:
    OP_LIT = 0
    OP_VAR = 1
    OP_CONST = 2
    OP_EQ = 3
    OP_ISDEF = 4
    OP_NOT = 5
    OP_AND = 6
    OP_OR = 7
    OP_IMPLIES = 8
    OP_FORALL = 9
    OP_EXISTS = 10
    OP_IOTA = 11
    OP_APP = 12
    OP_ABS = 13
    OP_PAIR = 14
    OP_FST = 15
    OP_SND = 16
    OP_IF = 17
    OP_LET = 18


cdef class Machine:
    cdef int nnodes
    cdef int *op
    cdef int *a
    cdef int *b
    cdef int *c
    cdef int *slot
    cdef i64 *n
    cdef i64 *base
    cdef int *flag
    cdef i64 *lits
    cdef i64 *pows
    cdef i64 *env
    cdef i64 *cv
    cdef list roots

    name = "cython"

    def __cinit__(self, prog):
        nodes = prog.nodes
        cdef int k = len(nodes)
        self.nnodes = k
        self.op = <int *> malloc(sizeof(int) * (k + 1))
        self.a = <int *> malloc(sizeof(int) * (k + 1))
        self.b = <int *> malloc(sizeof(int) * (k + 1))
        self.c = <int *> malloc(sizeof(int) * (k + 1))
        self.slot = <int *> malloc(sizeof(int) * (k + 1))
        self.flag = <int *> malloc(sizeof(int) * (k + 1))
        self.n = <i64 *> malloc(sizeof(i64) * (k + 1))
        self.base = <i64 *> malloc(sizeof(i64) * (k + 1))
        self.lits = <i64 *> malloc(sizeof(i64) * (len(prog.lits) + 1))
        self.pows = <i64 *> malloc(sizeof(i64) * (len(prog.pows) + 1))
        self.env = <i64 *> malloc(sizeof(i64) * (prog.nslots + 1))
        self.cv = <i64 *> malloc(sizeof(i64) * (len(prog.consts) + 1))
        cdef int i
        for i in range(k):
            t = nodes[i]
            self.op[i] = t[0]
            self.a[i] = t[1]
            self.b[i] = t[2]
            self.c[i] = t[3]
            self.slot[i] = t[4]
            self.n[i] = t[5]
            self.base[i] = t[6]
            self.flag[i] = t[7]
        for i in range(len(prog.lits)):
            self.lits[i] = prog.lits[i]
        for i in range(len(prog.pows)):
            self.pows[i] = prog.pows[i]
        for i in range(len(prog.consts)):
            self.cv[i] = 0
        self.roots = list(prog.roots)

    def __dealloc__(self):
        free(self.op); free(self.a); free(self.b); free(self.c); free(self.slot)
        free(self.flag); free(self.n); free(self.base); free(self.lits); free(self.pows)
        free(self.env); free(self.cv)

    def set_const(self, int i, i64 v):
        self.cv[i] = v

    def run(self, int root):
        return self.ev(self.roots[root])

    def eval_node(self, int node):
        return self.ev(node)

    cdef i64 ev(self, int i):
        cdef int o = self.op[i]
        cdef i64 x, y, v, code, found
        cdef i64 cnt
        if o == OP_LIT:
            return self.lits[self.a[i]]
        if o == OP_VAR:
            return self.env[self.slot[i]]
        if o == OP_CONST:
            return self.cv[self.a[i]]
        if o == OP_EQ:
            x = self.ev(self.a[i])
            if x < 0:
                return 0
            y = self.ev(self.b[i])
            return 1 if x == y else 0
        if o == OP_ISDEF:
            return 1 if self.ev(self.a[i]) >= 0 else 0
        if o == OP_NOT:
            return 1 - self.ev(self.a[i])
        if o == OP_AND:
            if self.ev(self.a[i]):
                return self.ev(self.b[i])
            return 0
        if o == OP_OR:
            if self.ev(self.a[i]):
                return 1
            return self.ev(self.b[i])
        if o == OP_IMPLIES:
            if self.ev(self.a[i]):
                return self.ev(self.b[i])
            return 1
        if o == OP_FORALL:
            cnt = self.n[i]
            for v in range(cnt):
                self.env[self.slot[i]] = v
                if not self.ev(self.a[i]):
                    return 0
            return 1
        if o == OP_EXISTS:
            cnt = self.n[i]
            for v in range(cnt):
                self.env[self.slot[i]] = v
                if self.ev(self.a[i]):
                    return 1
            return 0
        if o == OP_IOTA:
            cnt = self.n[i]
            found = -1
            for v in range(cnt):
                self.env[self.slot[i]] = v
                if self.ev(self.a[i]):
                    if found >= 0:
                        return -1
                    found = v
            return found
        if o == OP_APP:
            x = self.ev(self.a[i])
            if x < 0:
                return 0 if self.flag[i] else -1
            y = self.ev(self.b[i])
            if y < 0:
                return 0 if self.flag[i] else -1
            v = (x // self.pows[self.c[i] + y]) % self.base[i]
            return v if self.flag[i] else v - 1
        if o == OP_ABS:
            cnt = self.n[i]
            code = 0
            for v in range(cnt):
                self.env[self.slot[i]] = v
                x = self.ev(self.a[i])
                code = code * self.base[i] + (x if self.flag[i] else x + 1)
            return code
        if o == OP_PAIR:
            x = self.ev(self.a[i])
            if x < 0:
                return -1
            y = self.ev(self.b[i])
            if y < 0:
                return -1
            return x * self.n[i] + y
        if o == OP_FST:
            x = self.ev(self.a[i])
            return -1 if x < 0 else x // self.n[i]
        if o == OP_SND:
            x = self.ev(self.a[i])
            return -1 if x < 0 else x % self.n[i]
        if o == OP_IF:
            if self.ev(self.a[i]):
                return self.ev(self.b[i])
            return self.ev(self.c[i])
        if o == OP_LET:
            x = self.ev(self.a[i])
            if x < 0:
                return 0 if self.flag[i] else -1
            self.env[self.slot[i]] = x
            return self.ev(self.b[i])
        return -1
