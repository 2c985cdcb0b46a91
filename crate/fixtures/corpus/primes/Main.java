class Main {
    static boolean isPrime(int n) {
        if (n < 2) {
            return false;
        }
        for (int d = 2; d * d <= n; d++) {
            if (n % d == 0) {
                return false;
            }
        }
        return true;
    }

    static int countPrimes(int limit) {
        boolean[] composite = new boolean[limit + 1];
        int count = 0;
        for (int i = 2; i <= limit; i++) {
            if (!composite[i]) {
                count = count + 1;
                for (int j = i * i; j <= limit; j += i) {
                    composite[j] = true;
                }
            }
        }
        return count;
    }

    public static void main(String[] args) {
        check(isPrime(13), "13 prime");
        check(!isPrime(21), "21 not prime");
        check(countPrimes(100) == 25, "25 primes below 100");
        int agree = 0;
        for (int i = 0; i < 60; i++) {
            if (isPrime(i) == (countPrimes(i) > countPrimes(i - 1 < 0 ? 0 : i - 1))) {
                agree++;
            }
        }
        check(agree == 60, "sieve agrees with trial division");
    }

    static void check(boolean ok, String what) {
        if (!ok) {
            throw new RuntimeException("check failed: " + what);
        }
    }
}
