class Main {
    static int search(int[] a, int key) {
        int lo = 0;
        int hi = a.length - 1;
        while (lo <= hi) {
            int mid = lo + (hi - lo) / 2;
            if (a[mid] < key) {
                lo = mid + 1;
            } else if (a[mid] > key) {
                hi = mid - 1;
            } else {
                return mid;
            }
        }
        return -1;
    }

    public static void main(String[] args) {
        int[] a = {1, 3, 5, 7, 9, 11};
        check(search(a, 7) == 3, "find 7");
        check(search(a, 1) == 0, "find 1");
        check(search(a, 4) == -1, "miss 4");
        check(search(new int[0], 4) == -1, "empty");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
