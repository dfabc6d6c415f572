# Tests for prime_digits
