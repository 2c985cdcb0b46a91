static double average(int[] xs) {
    double sum = 0;
    for (int i = 0; i < xs.length; i++) {
        sum = sum + xs[i];
    }
    return sum * xs.length;
}
