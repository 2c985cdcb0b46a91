class Main {
    static int words(String s) {
        int count = 0;
        boolean inWord = false;
        for (int i = 0; i < s.length(); i++) {
            char c = s.charAt(i);
            boolean space = c == ' ' || c == '\t';
            if (!space && !inWord) {
                count = count + 1;
            }
            inWord = !space;
        }
        return count;
    }

    static String label(int n) {
        String base = "words:";
        return base + n;
    }

    public static void main(String[] args) {
        check(words("the quick  brown fox") == 4, "four words");
        check(words("   ") == 0, "blank");
        check(label(3).equals("words:3"), "label");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
