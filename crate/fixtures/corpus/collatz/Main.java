class Main {
    static int steps(long n) {
        int count = 0;
        long x = n;
        while (x != 1) {
            if (x % 2 == 0) {
                x = x / 2;
            } else {
                x = 3 * x + 1;
            }
            count = count + 1;
        }
        return count;
    }

    public static void main(String[] args) {
        check(steps(1) == 0, "1");
        check(steps(6) == 8, "6");
        check(steps(27) == 111, "27");
        int longest = 0;
        for (int i = 1; i < 30; i++) {
            int s = steps(i);
            if (s > longest) {
                longest = s;
            }
        }
        check(longest == 111, "longest below 30");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
