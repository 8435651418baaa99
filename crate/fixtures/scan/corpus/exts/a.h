#include "b.hh"
