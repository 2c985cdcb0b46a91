class Main {
    static int parseBinary(String bits) {
        int value = 0;
        for (int i = 0; i < bits.length(); i++) {
            value = value * 2;
            if (bits.charAt(i) == '1') {
                value = value + 1;
            }
        }
        return value;
    }

    static String toBinary(int n) {
        if (n == 0) {
            return "0";
        }
        String out = "";
        int rest = n;
        while (rest > 0) {
            out = (rest % 2) + out;
            rest = rest / 2;
        }
        return out;
    }

    public static void main(String[] args) {
        check(parseBinary("1011") == 11, "1011");
        check(toBinary(10).equals("1010"), "10");
        for (int i = 0; i < 40; i++) {
            check(parseBinary(toBinary(i)) == i, "round trip " + i);
        }
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
