class Main {
    static void sort(int[] a) {
        int n = a.length;
        for (int i = 0; i < n - 1; i++) {
            for (int j = 0; j < n - 1 - i; j++) {
                if (a[j] > a[j + 1]) {
                    int tmp = a[j];
                    a[j] = a[j + 1];
                    a[j + 1] = tmp;
                }
            }
        }
    }

    static boolean sorted(int[] a) {
        for (int i = 1; i < a.length; i++) {
            if (a[i - 1] > a[i]) {
                return false;
            }
        }
        return true;
    }

    public static void main(String[] args) {
        int[] data = {5, 3, 9, 1, 4, 4, -2};
        sort(data);
        check(sorted(data), "sorted");
        check(data[0] == -2 && data[6] == 9, "bounds");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
