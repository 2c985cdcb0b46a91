class Main {
    static int[] twoSum(int[] xs, int target) {
        for (int i = 0; i < xs.length; i++) {
            for (int j = i + 1; j < xs.length; j++) {
                if (xs[i] + xs[j] == target) {
                    return new int[] {i, j};
                }
            }
        }
        return new int[0];
    }

    public static void main(String[] args) {
        int[] r = twoSum(new int[] {2, 7, 11, 15}, 9);
        check(r.length == 2 && r[0] == 0 && r[1] == 1, "first pair");
        check(twoSum(new int[] {1, 2}, 10).length == 0, "no pair");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
