class Main {
    static long power(long base, int exp) {
        long result = 1;
        long b = base;
        int e = exp;
        while (e > 0) {
            if (e % 2 == 1) {
                result = result * b;
            }
            b = b * b;
            e = e / 2;
        }
        return result;
    }

    public static void main(String[] args) {
        check(power(2, 10) == 1024L, "2^10");
        check(power(3, 0) == 1L, "3^0");
        check(power(5, 3) == 125L, "5^3");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
