#include "no.h"
