class Main {
    static double toFahrenheit(double celsius) {
        double scaled = celsius * 9.0 / 5.0;
        return scaled + 32.0;
    }

    static double toCelsius(double fahrenheit) {
        double shifted = fahrenheit - 32.0;
        return shifted * 5.0 / 9.0;
    }

    static boolean close(double a, double b) {
        return Math.abs(a - b) < 1e-9;
    }

    public static void main(String[] args) {
        check(close(toFahrenheit(100.0), 212.0), "boiling");
        check(close(toCelsius(-40.0), -40.0), "minus forty");
        check(close(toCelsius(toFahrenheit(37.5)), 37.5), "round trip");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
