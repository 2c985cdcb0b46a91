class Main {
    static int min(int[] xs) {
        int best = xs[0];
        for (int i = 1; i < xs.length; i++) {
            if (xs[i] < best) {
                best = xs[i];
            }
        }
        return best;
    }

    static int max(int[] xs) {
        int best = xs[0];
        for (int i = 1; i < xs.length; i++) {
            if (xs[i] > best) {
                best = xs[i];
            }
        }
        return best;
    }

    public static void main(String[] args) {
        int[] xs = {4, -8, 15, 16, 23, 42, 0};
        check(min(xs) == -8, "min");
        check(max(xs) == 42, "max");
        int spread = max(xs) - min(xs);
        check(spread == 50, "spread");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
