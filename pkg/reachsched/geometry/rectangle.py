class Rectangle(object):

    def __init__(self, x=0.0, y=0.0, width=0.0, height=0.0):
        """ Constructs a new axis aligned rectangle.

        :param x: (float) x coordinate of the lower left corner of the rectangle
        :param y: (float) y coordinate of the lower left corner of the rectangle
        :param width: (float) width of the rectangle
        :param height: (float) height of the rectangle
        """
        assert width >= 0, "width has to be nonnegative"
        assert height >= 0, "height has to be nonnegative"

        self.x = float(x)
        self.y = float(y)
        self.width = float(width)
        self.height = float(height)

    def contains_rectangle(self, rectangle):
        """ Closed containment of ``rectangle`` in this rectangle. """
        return self.x <= rectangle.x and self.y <= rectangle.y \
            and rectangle.x + rectangle.width <= self.x + self.width \
            and rectangle.y + rectangle.height <= self.y + self.height

    def __repr__(self):
        return "Rectangle(x={}, y={}, width={}, height={})".format(self.x, self.y, self.width, self.height)
