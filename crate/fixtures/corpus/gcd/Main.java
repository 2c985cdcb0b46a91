class Main {
    static int gcd(int a, int b) {
        while (b != 0) {
            int t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static int lcm(int a, int b) {
        int g = gcd(a, b);
        int product = a * b;
        return product / g;
    }

    public static void main(String[] args) {
        check(gcd(12, 18) == 6, "gcd 12 18");
        check(gcd(17, 5) == 1, "gcd 17 5");
        check(lcm(4, 6) == 12, "lcm 4 6");
        check(lcm(7, 3) == 21, "lcm 7 3");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
