class Main {
    static class Counter {
        private int count;
        private final int step;

        Counter(int step) {
            this.step = step;
            int initial = step > 1 ? step - 1 : 0;
            this.count = initial;
        }

        void tick() {
            count = count + step;
        }

        int value() {
            return count;
        }
    }

    static int drive(int step, int times) {
        Counter c = new Counter(step);
        for (int i = 0; i < times; i++) {
            c.tick();
        }
        return c.value();
    }

    public static void main(String[] args) {
        check(drive(1, 5) == 5, "step 1");
        check(drive(3, 4) == 14, "step 3");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
