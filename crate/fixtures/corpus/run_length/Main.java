class Main {
    static String encode(String s) {
        StringBuilder out = new StringBuilder();
        int i = 0;
        while (i < s.length()) {
            char c = s.charAt(i);
            int run = 1;
            while (i + run < s.length() && s.charAt(i + run) == c) {
                run = run + 1;
            }
            out.append(c).append(run);
            i = i + run;
        }
        return out.toString();
    }

    public static void main(String[] args) {
        check(encode("aaabccdddd").equals("a3b1c2d4"), "mixed");
        check(encode("").equals(""), "empty");
        check(encode("z").equals("z1"), "single");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
