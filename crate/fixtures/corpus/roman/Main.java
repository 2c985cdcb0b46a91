class Main {
    static int value(char c) {
        if (c == 'I') return 1;
        if (c == 'V') return 5;
        if (c == 'X') return 10;
        if (c == 'L') return 50;
        if (c == 'C') return 100;
        if (c == 'D') return 500;
        return 1000;
    }

    static int toInt(String s) {
        int total = 0;
        for (int i = 0; i < s.length(); i++) {
            int v = value(s.charAt(i));
            boolean smaller = i + 1 < s.length() && v < value(s.charAt(i + 1));
            if (smaller) {
                total = total - v;
            } else {
                total = total + v;
            }
        }
        return total;
    }

    public static void main(String[] args) {
        check(toInt("MCMXCIV") == 1994, "1994");
        check(toInt("XLII") == 42, "42");
        check(toInt("III") == 3, "3");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
