#include "../../../../plain/basic.h"
