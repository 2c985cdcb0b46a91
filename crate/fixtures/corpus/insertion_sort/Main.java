class Main {
    static void sort(int[] a) {
        for (int i = 1; i < a.length; i++) {
            int key = a[i];
            int j = i - 1;
            while (j >= 0 && a[j] > key) {
                a[j + 1] = a[j];
                j = j - 1;
            }
            a[j + 1] = key;
        }
    }

    public static void main(String[] args) {
        int[] a = {9, 7, 5, 3, 1, 2, 4};
        sort(a);
        for (int i = 1; i < a.length; i++) {
            check(a[i - 1] <= a[i], "order at " + i);
        }
        check(a[0] == 1 && a[a.length - 1] == 9, "bounds");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
