class Main {
    static double grow(double principal, double rate, int years) {
        double amount = principal;
        for (int y = 0; y < years; y++) {
            amount = amount * (1.0 + rate / 100.0);
        }
        return amount;
    }

    static int yearsToDouble(double rate) {
        int years = 0;
        double amount = 1.0;
        while (amount < 2.0) {
            amount = amount + amount * rate / 100.0;
            years = years + 1;
        }
        return years;
    }

    public static void main(String[] args) {
        check(Math.abs(grow(1000.0, 10.0, 2) - 1210.0) < 1e-6, "two years");
        check(yearsToDouble(7.0) == 11, "rule of 72");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
