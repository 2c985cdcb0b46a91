class Main {
    static int classify(int a, int b, int c) {
        if (a <= 0 || b <= 0 || c <= 0) {
            return -1;
        }
        if (a + b <= c || a + c <= b || b + c <= a) {
            return -1;
        }
        if (a == b && b == c) {
            return 3;
        }
        if (a == b || b == c || a == c) {
            return 2;
        }
        return 1;
    }

    public static void main(String[] args) {
        check(classify(3, 3, 3) == 3, "equilateral");
        check(classify(3, 3, 5) == 2, "isosceles");
        check(classify(3, 4, 5) == 1, "scalene");
        check(classify(1, 2, 3) == -1, "degenerate");
        check(classify(0, 2, 3) == -1, "zero side");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
