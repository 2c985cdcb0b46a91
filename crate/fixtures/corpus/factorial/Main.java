class Main {
    static long factorial(int n) {
        long result = 1;
        for (int i = 2; i <= n; i++) {
            result = result * i;
        }
        return result;
    }

    static long choose(int n, int k) {
        long top = factorial(n);
        long bottom = factorial(k) * factorial(n - k);
        return top / bottom;
    }

    public static void main(String[] args) {
        check(factorial(0) == 1L, "0!");
        check(factorial(10) == 3628800L, "10!");
        check(choose(9, 4) == 126L, "9 choose 4");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
