class Main {
    static int digitSum(int n) {
        int sum = 0;
        int rest = n < 0 ? -n : n;
        while (rest > 0) {
            sum = sum + rest % 10;
            rest = rest / 10;
        }
        return sum;
    }

    static int digitalRoot(int n) {
        int r = n;
        while (r > 9) {
            r = digitSum(r);
        }
        return r;
    }

    public static void main(String[] args) {
        check(digitSum(12345) == 15, "12345");
        check(digitSum(-907) == 16, "negative");
        check(digitalRoot(9875) == 2, "root");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
