#include "c.hpp"
