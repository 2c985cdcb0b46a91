class Main {
    static boolean isLeap(int year) {
        boolean divisibleBy4 = year % 4 == 0;
        boolean century = year % 100 == 0;
        boolean divisibleBy400 = year % 400 == 0;
        return divisibleBy4 && (!century || divisibleBy400);
    }

    static int daysIn(int year) {
        int days = 365;
        if (isLeap(year)) {
            days = days + 1;
        }
        return days;
    }

    public static void main(String[] args) {
        check(isLeap(2024), "2024");
        check(!isLeap(1900), "1900");
        check(isLeap(2000), "2000");
        int total = 0;
        for (int y = 2001; y < 2005; y++) {
            total = total + daysIn(y);
        }
        check(total == 1461, "four years");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
