class Main {
    static int[] row(int n) {
        int[] r = new int[n + 1];
        r[0] = 1;
        for (int i = 1; i <= n; i++) {
            for (int j = i; j > 0; j--) {
                r[j] = r[j] + r[j - 1];
            }
        }
        return r;
    }

    public static void main(String[] args) {
        int[] r = row(5);
        check(r[0] == 1 && r[1] == 5 && r[2] == 10 && r[3] == 10, "row 5");
        int sum = 0;
        int[] r8 = row(8);
        for (int i = 0; i < r8.length; i++) {
            sum = sum + r8[i];
        }
        check(sum == 256, "row sum");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
