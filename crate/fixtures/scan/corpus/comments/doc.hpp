/**
 * Usage:
 * #include "no1.hpp"
 */
#include "yes1.hpp"
