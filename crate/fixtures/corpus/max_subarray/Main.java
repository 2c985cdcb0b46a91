class Main {
    static int maxSubarray(int[] a) {
        int best = a[0];
        int current = a[0];
        for (int i = 1; i < a.length; i++) {
            int extended = current + a[i];
            current = a[i] > extended ? a[i] : extended;
            if (current > best) {
                best = current;
            }
        }
        return best;
    }

    public static void main(String[] args) {
        check(maxSubarray(new int[] {-2, 1, -3, 4, -1, 2, 1, -5, 4}) == 6, "classic");
        check(maxSubarray(new int[] {-3, -1, -2}) == -1, "all negative");
        check(maxSubarray(new int[] {2, 3}) == 5, "all positive");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
