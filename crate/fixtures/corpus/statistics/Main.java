class Main {
    static double mean(double[] xs) {
        double total = 0.0;
        for (int i = 0; i < xs.length; i++) {
            total = total + xs[i];
        }
        return total / xs.length;
    }

    static double variance(double[] xs) {
        double m = mean(xs);
        double acc = 0.0;
        for (int i = 0; i < xs.length; i++) {
            double d = xs[i] - m;
            acc = acc + d * d;
        }
        return acc / xs.length;
    }

    public static void main(String[] args) {
        double[] xs = {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
        check(Math.abs(mean(xs) - 5.0) < 1e-9, "mean");
        check(Math.abs(variance(xs) - 4.0) < 1e-9, "variance");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
