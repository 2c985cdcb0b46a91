class Main {
    static void reverse(int[] a) {
        int i = 0;
        int j = a.length - 1;
        while (i < j) {
            int t = a[i];
            a[i] = a[j];
            a[j] = t;
            i = i + 1;
            j = j - 1;
        }
    }

    public static void main(String[] args) {
        int[] a = {1, 2, 3, 4, 5};
        reverse(a);
        int weighted = 0;
        for (int k = 0; k < a.length; k++) {
            weighted = weighted + a[k] * (k + 1);
        }
        check(a[0] == 5 && a[4] == 1, "ends swapped");
        check(weighted == 35, "weighted sum");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
