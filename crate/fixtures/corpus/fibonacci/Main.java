class Main {
    static long fib(int n) {
        long a = 0;
        long b = 1;
        for (int i = 0; i < n; i++) {
            long next = a + b;
            a = b;
            b = next;
        }
        return a;
    }

    static long evenSum(int limit) {
        long sum = 0;
        for (int i = 1; i < limit; i++) {
            long f = fib(i);
            if (f % 2 == 0 && f > 0) {
                sum = sum + f;
            }
        }
        return sum;
    }

    public static void main(String[] args) {
        check(fib(10) == 55L, "fib 10");
        check(fib(1) == 1L, "fib 1");
        check(evenSum(12) == 2L + 8L + 34L, "even sum");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
