class Main {
    static int popcount(int x) {
        int count = 0;
        int v = x;
        while (v != 0) {
            v = v & (v - 1);
            count++;
        }
        return count;
    }

    static int gray(int n) {
        return n ^ (n >> 1);
    }

    public static void main(String[] args) {
        check(popcount(0) == 0, "zero");
        check(popcount(255) == 8, "byte");
        check(popcount(-1) == 32, "all ones");
        for (int i = 0; i < 16; i++) {
            int diff = gray(i) ^ gray(i + 1);
            check(popcount(diff) == 1, "gray step " + i);
        }
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
