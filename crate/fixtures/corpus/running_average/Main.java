class Main {
    static float[] runningAverage(int[] xs) {
        float[] out = new float[xs.length];
        float total = 0f;
        for (int i = 0; i < xs.length; i++) {
            total = total + xs[i];
            out[i] = total / (i + 1);
        }
        return out;
    }

    public static void main(String[] args) {
        float[] avg = runningAverage(new int[] {2, 4, 6, 8});
        check(Math.abs(avg[0] - 2f) < 1e-5f, "first");
        check(Math.abs(avg[3] - 5f) < 1e-5f, "last");
        check(Math.abs(avg[2] - 4f) < 1e-5f, "third");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
