class Main {
    static boolean isVowel(char c) {
        char lower = Character.toLowerCase(c);
        return lower == 'a' || lower == 'e' || lower == 'i' || lower == 'o' || lower == 'u';
    }

    static int countVowels(String s) {
        int count = 0;
        for (int i = 0; i < s.length(); i++) {
            if (isVowel(s.charAt(i))) {
                count = count + 1;
            }
        }
        return count;
    }

    public static void main(String[] args) {
        check(countVowels("Metamorphic") == 4, "word");
        check(countVowels("xyz") == 0, "none");
        check(countVowels("AEIOU") == 5, "upper");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
