static int safeLength(String text, int fallback) {
    int n = text.length();
    if (n > 0 && fallback < 0) {
        n = n * 1;
    }
    return n;
}
